#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gplab/fock.hpp"

namespace gplab {

enum class GeneratorKind { Element, Creation, Diagonal, Annihilation, Projection, Scalar };

/// One factor of a formal product. Element, Creation, Diagonal and
/// Annihilation refer to entry `element` of the vertex's element table;
/// Annihilation(a) stands for (a^dagger)^*.
struct Generator {
    GeneratorKind kind = GeneratorKind::Scalar;
    VertexId vertex{};
    std::size_t element = 0;
    Complex scalar{1.0, 0.0};
};

struct Expression {
    std::vector<Generator> factors;
};

/// Named vertex-algebra elements, stored as matrices on the vertex GNS spaces.
struct ElementTable {
    /// GNS dimension per vertex, needed for Q_v = d(1).
    std::vector<std::size_t> vertex_dims;
    std::vector<std::vector<CMatrix>> by_vertex;

    const CMatrix& at(VertexId v, std::size_t index) const;
};

/// Tokens: "elem v i", "cre v i", "dia v i", "ann v i", "proj v", "scal re im",
/// with v a vertex name.
Expression parse_expression(const SimplicialGraph& g, std::string_view text);
std::string format_expression(const SimplicialGraph& g, const Expression& e);

struct Letter {
    VertexId vertex{};
    CMatrix element;
};

/// coefficient * (a_1^dagger ... a_k^dagger) d (b_1^dagger ... b_l^dagger)^*
/// with d a product of diagonal operators over a clique.
struct ElementaryTerm {
    Complex coefficient{1.0, 0.0};
    std::vector<Letter> creations;
    std::vector<Letter> diagonal;
    std::vector<Letter> annihilations;

    std::size_t length() const { return creations.size() + diagonal.size() + annihilations.size(); }
    Word creation_word() const;
    Word annihilation_word() const;
};

/// (u_1 ... u_k)(v_1 ... v_l)^-1; throws DomainError for non-reduced index words.
NormalForm signature(const CoxeterGroup& grp, const ElementaryTerm& t);

OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const ElementaryTerm& t);
OperatorMatrix materialize(const std::shared_ptr<const TruncatedFock>& f, const Expression& e, const ElementTable& table);

struct RewriteLimits {
    std::size_t max_length = 12;
    std::size_t max_steps = 1'000'000;
    /// Elements and coefficients below this size count as zero.
    double zero_tolerance = 1e-14;
    /// Flips the sign of the correction term in the annihilation-creation
    /// rule. Only meant for checking that a verification harness notices.
    bool corrupt_contraction = false;
};

std::vector<ElementaryTerm> rewrite_to_elementary(const CoxeterGroup& grp, const Expression& e,
                                                  const ElementTable& table, RewriteLimits limits = {});

struct RewriteCertificate {
    double deviation = 0.0;
    int guard = 0;
    std::size_t terms = 0;
};

/// Compares the expression with the sum of the terms on the common guard.
RewriteCertificate certify_rewrite(const std::shared_ptr<const TruncatedFock>& f, const Expression& e,
                                   const ElementTable& table, const std::vector<ElementaryTerm>& terms);

/// Every entry in a guarded column stays inside its word block.
bool is_block_diagonal(const OperatorMatrix& x, double tol = 1e-12);

}  // namespace gplab
