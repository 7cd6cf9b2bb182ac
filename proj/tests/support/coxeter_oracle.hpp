#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "gplab/coxeter.hpp"

namespace gplab::oracle {

/// All words reachable from w by swapping neighbouring adjacent letters.
inline std::set<Word> shuffle_class(const SimplicialGraph& g, const Word& w) {
    std::set<Word> seen{w};
    std::queue<Word> todo;
    todo.push(w);
    while (!todo.empty()) {
        Word x = todo.front();
        todo.pop();
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            if (!g.adjacent(x[i], x[i + 1])) continue;
            Word y = x;
            std::swap(y[i], y[i + 1]);
            if (seen.insert(y).second) todo.push(y);
        }
    }
    return seen;
}

/// Shortest, then lexicographically least, word reachable from w by swaps of
/// commuting neighbours and deletion of neighbouring equal letters.
inline Word reduce_by_search(const SimplicialGraph& g, const Word& w) {
    std::set<Word> seen{w};
    std::queue<Word> todo;
    todo.push(w);
    Word best = w;
    while (!todo.empty()) {
        Word x = todo.front();
        todo.pop();
        if (x.size() < best.size() || (x.size() == best.size() && x < best)) best = x;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            Word y = x;
            if (x[i] == x[i + 1]) {
                y.erase(y.begin() + static_cast<std::ptrdiff_t>(i), y.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            } else if (g.adjacent(x[i], x[i + 1])) {
                std::swap(y[i], y[i + 1]);
            } else {
                continue;
            }
            if (seen.insert(y).second) todo.push(y);
        }
    }
    return best;
}

/// Geometric representation: s acts by e_t -> e_t - 2 B(s,t) e_s with
/// B(s,s) = 1, B(s,t) = 0 for edges and -1 otherwise. It is faithful.
inline Eigen::MatrixXd tits_matrix(const SimplicialGraph& g, const Word& w) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (VertexId s : w) {
        Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n);
        for (VertexId t : g.vertices()) {
            double b = s == t ? 1.0 : (g.adjacent(s, t) ? 0.0 : -1.0);
            r(static_cast<Eigen::Index>(s.index), static_cast<Eigen::Index>(t.index)) -= 2.0 * b;
        }
        m = m * r;
    }
    return m;
}

inline std::vector<Word> all_words(std::size_t rank, std::size_t length) {
    std::vector<Word> out{Word{}};
    for (std::size_t k = 0; k < length; ++k) {
        std::vector<Word> next;
        for (const Word& w : out)
            for (std::uint32_t v = 0; v < rank; ++v) {
                Word x = w;
                x.push_back(VertexId{v});
                next.push_back(std::move(x));
            }
        out = std::move(next);
    }
    return out;
}

/// Sphere sizes by breadth-first search on the Cayley graph, with elements
/// identified through the geometric representation.
inline std::vector<std::uint64_t> sphere_sizes_by_bfs(const SimplicialGraph& g, std::size_t depth) {
    auto key = [](const Eigen::MatrixXd& m) {
        std::vector<long> k;
        for (Eigen::Index i = 0; i < m.size(); ++i) k.push_back(std::lround(m.data()[i]));
        return k;
    };
    std::set<std::vector<long>> seen;
    std::vector<Word> frontier{Word{}};
    seen.insert(key(tits_matrix(g, {})));
    std::vector<std::uint64_t> sizes{1};
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<Word> next;
        for (const Word& w : frontier)
            for (VertexId s : g.vertices()) {
                Word x = w;
                x.push_back(s);
                if (seen.insert(key(tits_matrix(g, x))).second) next.push_back(std::move(x));
            }
        sizes.push_back(next.size());
        frontier = std::move(next);
    }
    return sizes;
}

/// Every labelled simplicial graph on n vertices.
inline std::vector<SimplicialGraph> all_graphs(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<SimplicialGraph> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((m >> k) & 1U) e.push_back(pairs[k]);
        out.push_back(SimplicialGraph::from_edges(n, e));
    }
    return out;
}

}  // namespace gplab::oracle
