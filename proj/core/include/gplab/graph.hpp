#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gplab {

/// Position of a vertex inside its host graph. The ordering of ids is the
/// global tie-break order for every lexicographic choice downstream.
struct VertexId {
    std::uint32_t index = 0;
    friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

/// Bit set over vertex ids; graphs are capped at 16 vertices.
using VertexMask = std::uint32_t;

inline constexpr std::size_t max_vertices = 16;

constexpr VertexMask bit(VertexId v) { return VertexMask{1} << v.index; }

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Walk {
    std::vector<VertexId> steps;
};

class SimplicialGraph {
public:
    SimplicialGraph() = default;
    SimplicialGraph(std::vector<std::string> names,
                    const std::vector<std::pair<std::string, std::string>>& edges);

    /// Vertices named a, b, c, ... (or v0, v1, ... beyond 26).
    static SimplicialGraph from_edges(std::size_t n,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& edges);
    static SimplicialGraph complete(std::size_t n);
    static SimplicialGraph edgeless(std::size_t n);
    static SimplicialGraph path(std::size_t n);
    static SimplicialGraph cycle(std::size_t n);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(VertexId v) const { return names_.at(v.index); }
    std::optional<VertexId> find(const std::string& name) const;
    VertexId id(const std::string& name) const;
    std::vector<VertexId> vertices() const;
    VertexMask all() const { return size() == 0 ? 0 : (VertexMask{1} << size()) - 1; }

    bool adjacent(VertexId u, VertexId v) const { return (adj_[u.index] & bit(v)) != 0; }
    /// Equal or adjacent: the letters commute in W.
    bool commute(VertexId u, VertexId v) const { return u == v || adjacent(u, v); }
    VertexMask neighbors(VertexId v) const { return adj_.at(v.index); }
    std::vector<std::pair<VertexId, VertexId>> edges() const;
    std::size_t edge_count() const;

    bool is_connected() const;
    /// Induced subgraph; vertex order and names are inherited.
    SimplicialGraph induced(VertexMask keep) const;

    friend bool operator==(const SimplicialGraph&, const SimplicialGraph&) = default;

private:
    std::vector<std::string> names_;
    std::vector<VertexMask> adj_;
};

SimplicialGraph complement(const SimplicialGraph& g);
SimplicialGraph link(const SimplicialGraph& g, VertexId v);
SimplicialGraph star(const SimplicialGraph& g, VertexId v);

/// All cliques including the empty one, ordered by size then lexicographically.
std::vector<VertexMask> cliques(const SimplicialGraph& g);

/// A closed walk visiting every vertex, or nothing when g is disconnected.
std::optional<Walk> closed_covering_walk(const SimplicialGraph& g,
                                         std::optional<VertexId> start = std::nullopt);
bool is_closed(const SimplicialGraph& g, const Walk& w);
bool is_walk(const SimplicialGraph& g, const Walk& w);

/// Induced subgraphs on the connected components of the complement.
std::vector<SimplicialGraph> join_decomposition(const SimplicialGraph& g);
/// Vertex masks of the join factors, in the order of join_decomposition.
std::vector<VertexMask> join_factor_masks(const SimplicialGraph& g);
/// Disjoint union with every cross pair joined by an edge.
SimplicialGraph graph_join(const SimplicialGraph& a, const SimplicialGraph& b);

std::vector<VertexId> members(VertexMask m);

}  // namespace gplab
