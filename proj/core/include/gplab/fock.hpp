#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gplab/coxeter.hpp"
#include "gplab/linalg.hpp"
#include "gplab/vertex_algebra.hpp"

namespace gplab {

/// Basis label: a normal form together with one index into H_v minus the
/// cyclic vector (so each slot is >= 1) per letter.
struct FockIndex {
    NormalForm word;
    std::vector<std::uint32_t> slots;

    friend bool operator==(const FockIndex&, const FockIndex&) = default;
};

struct FockLimits {
    std::size_t max_dimension = 20000;
    BallLimits ball{};
};

/// Orthonormal basis of the graph product Hilbert space restricted to word
/// length <= depth. Position 0 is the vacuum.
class TruncatedFock {
public:
    TruncatedFock(CoxeterGroup group, std::vector<std::size_t> vertex_dims, std::size_t depth,
                  FockLimits limits = {});

    const CoxeterGroup& group() const { return group_; }
    const SimplicialGraph& graph() const { return group_.graph(); }
    std::size_t depth() const { return depth_; }
    std::size_t dim() const { return word_of_.size(); }
    /// Dimension of H_v including the cyclic vector.
    std::size_t vertex_dim(VertexId v) const { return vertex_dims_.at(v.index); }
    const std::vector<std::size_t>& vertex_dims() const { return vertex_dims_; }

    const std::vector<NormalForm>& words() const { return words_; }
    std::optional<std::size_t> word_id(const NormalForm& w) const;
    std::size_t word_offset(std::size_t word) const { return offsets_[word]; }
    std::size_t block_size(std::size_t word) const { return offsets_[word + 1] - offsets_[word]; }

    std::size_t word_at(std::size_t position) const { return word_of_[position]; }
    std::size_t length_at(std::size_t position) const { return words_[word_of_[position]].length(); }

    FockIndex basis(std::size_t position) const;
    std::optional<std::size_t> index_of(const FockIndex& idx) const;
    /// Position of (word, slots) when the word is in range; slots must be valid.
    std::optional<std::size_t> position(const NormalForm& word, const std::vector<std::uint32_t>& slots) const;
    std::vector<std::uint32_t> slots_at(std::size_t position) const;

private:
    CoxeterGroup group_;
    std::vector<std::size_t> vertex_dims_;
    std::size_t depth_;
    std::vector<NormalForm> words_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> word_of_;
};

std::shared_ptr<const TruncatedFock> build_fock(const SimplicialGraph& g, const std::vector<GnsRep>& reps,
                                                std::size_t depth, FockLimits limits = {});
std::shared_ptr<const TruncatedFock> build_fock(const SimplicialGraph& g, const std::vector<std::size_t>& dims,
                                                std::size_t depth, FockLimits limits = {});

/// Compression P_N T P_N of an operator T, with the word-length level up to
/// which the matrix (and its adjoint) agree with T. `reach` bounds how far T
/// and T* move word length.
class OperatorMatrix {
public:
    OperatorMatrix(std::shared_ptr<const TruncatedFock> space, SparseMatrix m, int guard, int reach);

    static OperatorMatrix identity(std::shared_ptr<const TruncatedFock> space);
    static OperatorMatrix zero(std::shared_ptr<const TruncatedFock> space);

    const TruncatedFock& space() const { return *space_; }
    const std::shared_ptr<const TruncatedFock>& space_ptr() const { return space_; }
    const SparseMatrix& matrix() const { return m_; }
    CMatrix dense() const { return CMatrix(m_); }
    int guard() const { return guard_; }
    int reach() const { return reach_; }
    OperatorMatrix with_bounds(int guard, int reach) const { return {space_, m_, guard, reach}; }

    OperatorMatrix adjoint() const;

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

    CVector apply(const CVector& x) const { return m_ * x; }

private:
    std::shared_ptr<const TruncatedFock> space_;
    SparseMatrix m_;
    int guard_;
    int reach_;
};

/// Columns with word length <= level.
SparseMatrix restrict_columns(const TruncatedFock& f, const SparseMatrix& m, int level);
/// Frobenius norm of (a - b) on vectors of word length <= min guard; this
/// bounds the operator-norm deviation there.
double guarded_deviation(const OperatorMatrix& a, const OperatorMatrix& b);
double guarded_norm(const OperatorMatrix& a);

/// lambda_v(x) for x given as its matrix on the GNS space of vertex v.
OperatorMatrix lambda_op(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& x);
OperatorMatrix rho_op(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& x);

/// Projection onto the words starting with w, excluding the vacuum.
OperatorMatrix q_projection(const std::shared_ptr<const TruncatedFock>& f, const NormalForm& w);
/// Projection onto the block of the single word w.
OperatorMatrix p_projection(const std::shared_ptr<const TruncatedFock>& f, const NormalForm& w);
/// Projection onto word lengths <= level.
OperatorMatrix length_projection(const std::shared_ptr<const TruncatedFock>& f, std::size_t level);

OperatorMatrix creation(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a);
OperatorMatrix diagonal(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a);
/// Q_v^perp a Q_v, which is ((a*)^dagger)^*.
OperatorMatrix annihilation(const std::shared_ptr<const TruncatedFock>& f, VertexId v, const CMatrix& a);

OperatorMatrix gauge_unitary(const std::shared_ptr<const TruncatedFock>& f, const std::vector<Complex>& z);
OperatorMatrix expectation_diag(const OperatorMatrix& x);
OperatorMatrix gauge_average(const OperatorMatrix& x, std::size_t grid_order);
/// Compression to the Fock space of the induced subgraph on `keep`, then
/// re-embedded acting on the leading legs with letters in `keep`.
OperatorMatrix expectation_subgraph(const OperatorMatrix& x, VertexMask keep);
OperatorMatrix expectation_subgraph(const OperatorMatrix& x, const SimplicialGraph& sub);

/// <x Omega, Omega>.
Complex vacuum_eval(const OperatorMatrix& x);

/// For k = 0..N-1, the norm of E(x* x) on word lengths in (k, N].
std::vector<double> tail_profile(const OperatorMatrix& x);

struct TensorSplitReport {
    double max_deviation = 0.0;
    std::size_t generators_checked = 0;
    std::size_t dimension = 0;
};

/// Verifies that the basis permutation onto the tensor product of the two
/// factor Fock spaces intertwines lambda_v(x) with x (x) 1 and 1 (x) x.
TensorSplitReport tensor_split_check(const SimplicialGraph& g, VertexMask first, const std::vector<GnsRep>& reps,
                                     std::size_t depth);

/// Centered copy of a GNS-space operator: x - <x xi, xi> 1.
CMatrix centered_matrix(const CMatrix& x);
/// <x xi, xi>.
inline Complex vertex_state(const CMatrix& x) { return x(0, 0); }

}  // namespace gplab
