#include "gplab/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>

namespace gplab {

namespace {

std::string default_name(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "v" + std::to_string(i);
}

VertexMask component_of(const std::vector<VertexMask>& adj, VertexMask within, VertexId seed) {
    VertexMask seen = bit(seed);
    VertexMask frontier = seen;
    while (frontier != 0) {
        VertexMask next = 0;
        for (VertexId v : members(frontier)) next |= adj[v.index] & within;
        frontier = next & ~seen;
        seen |= next;
    }
    return seen;
}

}  // namespace

std::vector<VertexId> members(VertexMask m) {
    std::vector<VertexId> out;
    while (m != 0) {
        out.push_back(VertexId{static_cast<std::uint32_t>(std::countr_zero(m))});
        m &= m - 1;
    }
    return out;
}

SimplicialGraph::SimplicialGraph(std::vector<std::string> names,
                                 const std::vector<std::pair<std::string, std::string>>& edges)
    : names_(std::move(names)), adj_(names_.size(), 0) {
    if (names_.size() > max_vertices)
        throw GraphError("graph has " + std::to_string(names_.size()) + " vertices, cap is 16");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (names_[i] == names_[j]) throw GraphError("duplicate vertex name '" + names_[i] + "'");
    for (const auto& [x, y] : edges) {
        auto u = find(x);
        auto v = find(y);
        if (!u) throw GraphError("edge endpoint '" + x + "' is not a vertex");
        if (!v) throw GraphError("edge endpoint '" + y + "' is not a vertex");
        if (*u == *v) throw GraphError("loop at vertex '" + x + "'");
        adj_[u->index] |= bit(*v);
        adj_[v->index] |= bit(*u);
    }
}

SimplicialGraph SimplicialGraph::from_edges(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(default_name(i));
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw GraphError("edge endpoint out of range");
        named.emplace_back(names[u], names[v]);
    }
    return SimplicialGraph(std::move(names), named);
}

SimplicialGraph SimplicialGraph::complete(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return from_edges(n, e);
}

SimplicialGraph SimplicialGraph::edgeless(std::size_t n) { return from_edges(n, {}); }

SimplicialGraph SimplicialGraph::path(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return from_edges(n, e);
}

SimplicialGraph SimplicialGraph::cycle(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    if (n >= 3) e.emplace_back(n - 1, 0);
    return from_edges(n, e);
}

std::optional<VertexId> SimplicialGraph::find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return VertexId{static_cast<std::uint32_t>(i)};
    return std::nullopt;
}

VertexId SimplicialGraph::id(const std::string& name) const {
    auto v = find(name);
    if (!v) throw GraphError("unknown vertex '" + name + "'");
    return *v;
}

std::vector<VertexId> SimplicialGraph::vertices() const { return members(all()); }

std::vector<std::pair<VertexId, VertexId>> SimplicialGraph::edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId u : vertices())
        for (VertexId v : members(adj_[u.index]))
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::size_t SimplicialGraph::edge_count() const {
    std::size_t twice = 0;
    for (VertexMask m : adj_) twice += static_cast<std::size_t>(std::popcount(m));
    return twice / 2;
}

bool SimplicialGraph::is_connected() const {
    if (size() == 0) return false;
    return component_of(adj_, all(), VertexId{0}) == all();
}

SimplicialGraph SimplicialGraph::induced(VertexMask keep) const {
    keep &= all();
    SimplicialGraph out;
    std::vector<std::uint32_t> slot(size(), 0);
    for (VertexId v : members(keep)) {
        slot[v.index] = static_cast<std::uint32_t>(out.names_.size());
        out.names_.push_back(names_[v.index]);
    }
    out.adj_.assign(out.names_.size(), 0);
    for (VertexId v : members(keep))
        for (VertexId u : members(adj_[v.index] & keep))
            out.adj_[slot[v.index]] |= VertexMask{1} << slot[u.index];
    return out;
}

SimplicialGraph complement(const SimplicialGraph& g) {
    std::vector<std::pair<std::string, std::string>> e;
    for (VertexId u : g.vertices())
        for (VertexId v : g.vertices())
            if (u < v && !g.adjacent(u, v)) e.emplace_back(g.name(u), g.name(v));
    return SimplicialGraph(g.names(), e);
}

SimplicialGraph link(const SimplicialGraph& g, VertexId v) {
    if (v.index >= g.size()) throw GraphError("unknown vertex id " + std::to_string(v.index));
    return g.induced(g.neighbors(v));
}

SimplicialGraph star(const SimplicialGraph& g, VertexId v) {
    if (v.index >= g.size()) throw GraphError("unknown vertex id " + std::to_string(v.index));
    return g.induced(g.neighbors(v) | bit(v));
}

std::vector<VertexMask> cliques(const SimplicialGraph& g) {
    // Expansion by appending vertices larger than the current maximum keeps
    // each clique's member list sorted, so each is produced once.
    std::vector<VertexMask> out{0};
    std::vector<VertexMask> layer{0};
    while (!layer.empty()) {
        std::vector<VertexMask> next;
        for (VertexMask c : layer) {
            VertexMask candidates = g.all();
            for (VertexId v : members(c)) candidates &= g.neighbors(v);
            if (c != 0) {
                int top = 31 - std::countl_zero(c);
                candidates &= ~((VertexMask{2} << top) - 1);
            }
            for (VertexId v : members(candidates)) next.push_back(c | bit(v));
        }
        std::sort(next.begin(), next.end(), [](VertexMask a, VertexMask b) {
            return members(a) < members(b);
        });
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

bool is_walk(const SimplicialGraph& g, const Walk& w) {
    if (w.steps.empty()) return false;
    for (VertexId v : w.steps)
        if (v.index >= g.size()) return false;
    for (std::size_t i = 0; i + 1 < w.steps.size(); ++i)
        if (!g.adjacent(w.steps[i], w.steps[i + 1])) return false;
    return true;
}

bool is_closed(const SimplicialGraph& g, const Walk& w) {
    if (!is_walk(g, w)) return false;
    if (w.steps.size() == 1) return true;
    return g.adjacent(w.steps.back(), w.steps.front());
}

std::optional<Walk> closed_covering_walk(const SimplicialGraph& g, std::optional<VertexId> start) {
    if (g.size() == 0 || !g.is_connected()) return std::nullopt;
    VertexId s = start.value_or(VertexId{0});
    if (s.index >= g.size()) throw GraphError("unknown start vertex");
    if (g.size() == 1) return Walk{{s}};

    // Breadth-first search over (position, visited set); children are pushed
    // in vertex order, so the first hit is the lexicographically least among
    // the shortest closed covering walks.
    const std::size_t states = g.size() << g.size();
    auto key = [&](VertexId v, VertexMask seen) { return (static_cast<std::size_t>(seen) * g.size()) + v.index; };
    std::vector<std::int64_t> parent(states, -2);
    std::queue<std::pair<VertexId, VertexMask>> queue;
    parent[key(s, bit(s))] = -1;
    queue.emplace(s, bit(s));
    while (!queue.empty()) {
        auto [v, seen] = queue.front();
        queue.pop();
        if (seen == g.all() && g.adjacent(v, s)) {
            Walk w;
            std::int64_t k = static_cast<std::int64_t>(key(v, seen));
            while (k >= 0) {
                w.steps.push_back(VertexId{static_cast<std::uint32_t>(static_cast<std::size_t>(k) % g.size())});
                k = parent[static_cast<std::size_t>(k)];
            }
            std::reverse(w.steps.begin(), w.steps.end());
            return w;
        }
        for (VertexId u : members(g.neighbors(v))) {
            VertexMask nseen = seen | bit(u);
            std::size_t nk = key(u, nseen);
            if (parent[nk] != -2) continue;
            parent[nk] = static_cast<std::int64_t>(key(v, seen));
            queue.emplace(u, nseen);
        }
    }
    return std::nullopt;
}

std::vector<VertexMask> join_factor_masks(const SimplicialGraph& g) {
    SimplicialGraph c = complement(g);
    std::vector<VertexMask> adj;
    for (VertexId v : c.vertices()) adj.push_back(c.neighbors(v));
    std::vector<VertexMask> out;
    VertexMask left = g.all();
    while (left != 0) {
        VertexId seed{static_cast<std::uint32_t>(std::countr_zero(left))};
        VertexMask comp = component_of(adj, g.all(), seed);
        out.push_back(comp);
        left &= ~comp;
    }
    return out;
}

std::vector<SimplicialGraph> join_decomposition(const SimplicialGraph& g) {
    std::vector<SimplicialGraph> out;
    for (VertexMask m : join_factor_masks(g)) out.push_back(g.induced(m));
    return out;
}

SimplicialGraph graph_join(const SimplicialGraph& a, const SimplicialGraph& b) {
    std::vector<std::string> names = a.names();
    names.insert(names.end(), b.names().begin(), b.names().end());
    std::vector<std::pair<std::string, std::string>> e;
    for (auto [u, v] : a.edges()) e.emplace_back(a.name(u), a.name(v));
    for (auto [u, v] : b.edges()) e.emplace_back(b.name(u), b.name(v));
    for (const auto& x : a.names())
        for (const auto& y : b.names()) e.emplace_back(x, y);
    return SimplicialGraph(std::move(names), e);
}

}  // namespace gplab
