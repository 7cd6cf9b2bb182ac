#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gplab/errors.hpp"
#include "gplab/graph.hpp"

namespace gplab {

using Word = std::vector<VertexId>;

/// Canonical reduced word: the lexicographically least reduced
/// representative of its element. Equality is sequence equality.
struct NormalForm {
    Word letters;

    std::size_t length() const { return letters.size(); }
    bool is_identity() const { return letters.empty(); }

    friend bool operator==(const NormalForm&, const NormalForm&) = default;
    /// Shortlex: length first, then lexicographic.
    friend std::strong_ordering operator<=>(const NormalForm& a, const NormalForm& b) {
        if (auto c = a.letters.size() <=> b.letters.size(); c != 0) return c;
        return a.letters <=> b.letters;
    }
};

struct NormalFormHash {
    std::size_t operator()(const NormalForm& w) const noexcept;
};

/// One deleted pair during reduction, with the letters that separated it.
struct Cancellation {
    VertexId letter;
    Word between;
};

struct BallLimits {
    std::size_t max_depth = 12;
    std::size_t max_elements = 1'000'000;
};

/// The right-angled Coxeter group of a simplicial graph.
class CoxeterGroup {
public:
    explicit CoxeterGroup(SimplicialGraph g);

    const SimplicialGraph& graph() const { return graph_; }
    std::size_t rank() const { return graph_.size(); }

    NormalForm identity() const { return {}; }
    NormalForm generator(VertexId v) const;

    NormalForm reduce(std::span<const VertexId> word) const;
    std::vector<Cancellation> cancellation_trace(std::span<const VertexId> word) const;
    bool is_reduced(std::span<const VertexId> word) const;

    /// Order of positions that sorts a reduced word into normal form:
    /// the normal form is word[order[0]], word[order[1]], ...
    std::vector<std::size_t> canonical_order(std::span<const VertexId> reduced) const;

    NormalForm multiply(const NormalForm& u, const NormalForm& v) const;
    NormalForm inverse(const NormalForm& w) const;

    /// v <=_R w: |v^-1 w| = |w| - |v|.
    bool starts_with(const NormalForm& v, const NormalForm& w) const;
    /// v <=_L w: |w v^-1| = |w| - |v|.
    bool ends_with(const NormalForm& v, const NormalForm& w) const;
    bool starts_with(VertexId s, const NormalForm& w) const { return (first_letters(w) & bit(s)) != 0; }

    VertexMask first_letters(const NormalForm& w) const;
    VertexMask last_letters(const NormalForm& w) const;

    /// Least upper bound for <=_R, absent when no common upper bound exists.
    std::optional<NormalForm> join(const NormalForm& v, const NormalForm& w) const;
    /// Brute-force minimal upper bound over the ball of radius |v| + |w|.
    /// Throws DomainError if the minimal upper bounds are not unique.
    std::optional<NormalForm> join_by_search(const NormalForm& v, const NormalForm& w) const;
    NormalForm meet(const NormalForm& v, const NormalForm& w) const;

    bool commutes_with(const NormalForm& w, VertexId v) const;
    /// All letters of w, as a mask.
    VertexMask support(const NormalForm& w) const;

    /// Elements of length <= depth, in shortlex order.
    std::vector<NormalForm> ball(std::size_t depth, BallLimits limits = {}) const;
    std::vector<std::uint64_t> sphere_sizes(std::size_t depth, BallLimits limits = {}) const;

    NormalForm parse(const std::vector<std::string>& names) const;
    std::vector<std::string> names_of(const NormalForm& w) const;
    std::string format(const NormalForm& w) const;

private:
    void check_letters(std::span<const VertexId> word) const;
    Word reduce_letters(std::span<const VertexId> word, std::vector<Cancellation>* trace) const;

    SimplicialGraph graph_;
    std::vector<VertexMask> adj_;
};

}  // namespace gplab
