#pragma once

#include <optional>
#include <random>
#include <vector>

#include "gplab/errors.hpp"
#include "gplab/linalg.hpp"

namespace gplab {

/// Direct sum of full matrix algebras M_{d_1} + ... + M_{d_m}.
struct FiniteDimAlgebra {
    std::vector<std::size_t> blocks;

    /// Vector-space dimension, the sum of d_i^2.
    std::size_t dimension() const;
    std::size_t block_count() const { return blocks.size(); }
};

/// Element of a FiniteDimAlgebra, one square matrix per block.
struct AlgebraElement {
    std::vector<CMatrix> blocks;

    static AlgebraElement identity(const FiniteDimAlgebra& alg);
    static AlgebraElement zero(const FiniteDimAlgebra& alg);
    /// The matrix unit e_{ij} of block k.
    static AlgebraElement unit(const FiniteDimAlgebra& alg, std::size_t block, std::size_t i, std::size_t j);
    static AlgebraElement diagonal(const FiniteDimAlgebra& alg, const std::vector<Complex>& entries);
    static AlgebraElement random(const FiniteDimAlgebra& alg, std::mt19937_64& rng);

    AlgebraElement adjoint() const;
    bool conforms_to(const FiniteDimAlgebra& alg) const;
    double norm() const;

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(Complex s, const AlgebraElement& a);
};

/// Per-block density matrices of a state, omega(x) = sum_k tr(rho_k x_k).
struct StateSpec {
    std::vector<CMatrix> densities;

    static StateSpec normalized_trace(const FiniteDimAlgebra& alg);
    static StateSpec weights(const std::vector<double>& w);

    Complex evaluate(const AlgebraElement& x) const;
    /// Throws DomainError for non-conformant, non-Hermitian, non-PSD, or
    /// non-normalized densities.
    void validate(const FiniteDimAlgebra& alg, double tol = 1e-10) const;
    bool is_faithful(double tol = 1e-12) const;
    /// omega(xy) = omega(yx) on all pairs of matrix units.
    bool is_tracial(const FiniteDimAlgebra& alg, double tol = 1e-12) const;
};

std::vector<AlgebraElement> matrix_units(const FiniteDimAlgebra& alg);

/// Concrete GNS representation on an orthonormal basis of L^2(A, omega);
/// the cyclic vector is basis vector 0.
class GnsRep {
public:
    GnsRep(FiniteDimAlgebra alg, StateSpec state, const std::vector<AlgebraElement>& seeds = {});

    const FiniteDimAlgebra& algebra() const { return alg_; }
    const StateSpec& state() const { return state_; }
    std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
    static constexpr std::size_t cyclic_index = 0;

    CMatrix left_mult(const AlgebraElement& x) const;
    /// Coordinates of x.xi.
    CVector vector_of(const AlgebraElement& x) const;
    CVector cyclic_vector() const;

private:
    CMatrix hilbert_schmidt_left(const AlgebraElement& x) const;
    CVector hilbert_schmidt_vector(const AlgebraElement& x) const;

    FiniteDimAlgebra alg_;
    StateSpec state_;
    std::vector<CMatrix> factors_;
    CMatrix basis_;
};

GnsRep gns(const FiniteDimAlgebra& alg, const StateSpec& st);

/// x - omega(x) 1.
AlgebraElement centered(const AlgebraElement& x, const StateSpec& st);

/// Largest q with a a* >= q omega(a* a) 1, i.e. lambda_min(a a*) / omega(a* a).
/// Requires a != 0 and omega(a) = 0.
double optimal_q(const AlgebraElement& a, const StateSpec& st, double tol = 1e-10);

struct UnitarySearchResult {
    AlgebraElement unitary;
    /// omega(u x) = omega(x u) on a basis.
    bool central = false;
    std::size_t candidates_tried = 0;
};

struct UnitarySearchLimits {
    std::size_t phases_per_slot = 16;
    std::size_t max_candidates = 4096;
    double tolerance = 1e-12;
};

/// Deterministic search for a unitary in ker(omega): diagonal sign patterns,
/// blockwise signed permutations, then a diagonal phase grid. A central
/// witness is preferred when the family contains one. Absence only means
/// nothing was found in the family.
std::optional<UnitarySearchResult> centered_unitary_search(const FiniteDimAlgebra& alg, const StateSpec& st,
                                                           UnitarySearchLimits limits = {});

bool is_unitary(const AlgebraElement& u, double tol = 1e-10);
bool is_state_central(const FiniteDimAlgebra& alg, const StateSpec& st, const AlgebraElement& u, double tol = 1e-10);

/// Dimension of {X : X L(a) = L(a) X for all a}.
std::size_t commutant_dimension(const GnsRep& rep, double tol = 1e-9);
bool commutant_is_trivial(const GnsRep& rep, double tol = 1e-9);

/// Two-dimensional Hecke vertex: span{1, T} with T* = T, T^2 = 1 + p T and
/// tau(T) = 0, where p = q^{-1/2} (q - 1).
struct HeckeVertex {
    double q = 1.0;
    double p = 0.0;
    FiniteDimAlgebra algebra;
    StateSpec state;
    AlgebraElement generator;
    GnsRep rep;
    /// Exact matrix of T on the basis (xi, T xi): [[0, 1], [1, p]].
    CMatrix generator_matrix;
};

double hecke_parameter(double q);
HeckeVertex hecke_vertex(double q);

}  // namespace gplab
