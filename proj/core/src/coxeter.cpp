#include "gplab/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace gplab {

std::size_t NormalFormHash::operator()(const NormalForm& w) const noexcept {
    std::size_t h = w.letters.size();
    for (VertexId v : w.letters) h = h * 31 + v.index + 1;
    return h;
}

CoxeterGroup::CoxeterGroup(SimplicialGraph g) : graph_(std::move(g)) {
    for (VertexId v : graph_.vertices()) adj_.push_back(graph_.neighbors(v));
}

void CoxeterGroup::check_letters(std::span<const VertexId> word) const {
    for (VertexId v : word)
        if (v.index >= rank())
            throw GraphError("letter " + std::to_string(v.index) + " is not a vertex of the host graph");
}

NormalForm CoxeterGroup::generator(VertexId v) const {
    check_letters(std::span(&v, 1));
    return NormalForm{{v}};
}

Word CoxeterGroup::reduce_letters(std::span<const VertexId> word, std::vector<Cancellation>* trace) const {
    Word w(word.begin(), word.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < w.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                if (w[j] == w[i]) {
                    if (trace) trace->push_back({w[i], Word(w.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                                            w.begin() + static_cast<std::ptrdiff_t>(j))});
                    w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
                    w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                    break;
                }
                if ((adj_[w[i].index] & bit(w[j])) == 0) break;
            }
        }
    }
    return w;
}

std::vector<std::size_t> CoxeterGroup::canonical_order(std::span<const VertexId> reduced) const {
    const std::size_t n = reduced.size();
    std::vector<bool> used(n, false);
    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t step = 0; step < n; ++step) {
        // A remaining position is a candidate when every earlier remaining
        // letter is adjacent to it; take the candidate with the least letter.
        VertexMask before = 0;
        std::size_t best = n;
        for (std::size_t k = 0; k < n; ++k) {
            if (used[k]) continue;
            VertexId v = reduced[k];
            bool free = (before & ~adj_[v.index]) == 0;
            if (free && (best == n || v < reduced[best])) best = k;
            before |= bit(v);
        }
        used[best] = true;
        order.push_back(best);
    }
    return order;
}

NormalForm CoxeterGroup::reduce(std::span<const VertexId> word) const {
    check_letters(word);
    Word w = reduce_letters(word, nullptr);
    NormalForm out;
    out.letters.reserve(w.size());
    for (std::size_t k : canonical_order(w)) out.letters.push_back(w[k]);
    return out;
}

std::vector<Cancellation> CoxeterGroup::cancellation_trace(std::span<const VertexId> word) const {
    check_letters(word);
    std::vector<Cancellation> trace;
    reduce_letters(word, &trace);
    return trace;
}

bool CoxeterGroup::is_reduced(std::span<const VertexId> word) const {
    check_letters(word);
    return reduce_letters(word, nullptr).size() == word.size();
}

NormalForm CoxeterGroup::multiply(const NormalForm& u, const NormalForm& v) const {
    Word w = u.letters;
    w.insert(w.end(), v.letters.begin(), v.letters.end());
    return reduce(w);
}

NormalForm CoxeterGroup::inverse(const NormalForm& w) const {
    Word r(w.letters.rbegin(), w.letters.rend());
    return reduce(r);
}

bool CoxeterGroup::starts_with(const NormalForm& v, const NormalForm& w) const {
    if (v.length() > w.length()) return false;
    return multiply(inverse(v), w).length() == w.length() - v.length();
}

bool CoxeterGroup::ends_with(const NormalForm& v, const NormalForm& w) const {
    if (v.length() > w.length()) return false;
    return multiply(w, inverse(v)).length() == w.length() - v.length();
}

VertexMask CoxeterGroup::first_letters(const NormalForm& w) const {
    VertexMask before = 0;
    VertexMask out = 0;
    for (VertexId v : w.letters) {
        if ((before & ~adj_[v.index]) == 0) out |= bit(v);
        before |= bit(v);
    }
    return out;
}

VertexMask CoxeterGroup::last_letters(const NormalForm& w) const {
    VertexMask after = 0;
    VertexMask out = 0;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        if ((after & ~adj_[it->index]) == 0) out |= bit(*it);
        after |= bit(*it);
    }
    return out;
}

VertexMask CoxeterGroup::support(const NormalForm& w) const {
    VertexMask m = 0;
    for (VertexId v : w.letters) m |= bit(v);
    return m;
}

std::optional<NormalForm> CoxeterGroup::join(const NormalForm& v, const NormalForm& w) const {
    // Peel a first letter s of v. If s also starts w, both sides drop s.
    // Otherwise s v w has an upper bound only when s commutes with every
    // letter of w, in which case s w is the join of s and w.
    Word prefix;
    NormalForm a = v;
    NormalForm b = w;
    const std::size_t bound = v.length() + w.length();
    while (!a.is_identity()) {
        VertexMask fa = first_letters(a);
        VertexId s{static_cast<std::uint32_t>(std::countr_zero(fa))};
        NormalForm gs = generator(s);
        if ((first_letters(b) & bit(s)) != 0) {
            b = multiply(gs, b);
        } else if ((support(b) & ~adj_[s.index]) != 0) {
            return std::nullopt;
        }
        a = multiply(gs, a);
        prefix.push_back(s);
    }
    prefix.insert(prefix.end(), b.letters.begin(), b.letters.end());
    NormalForm out = reduce(prefix);
    if (out.length() != prefix.size() || out.length() > bound)
        throw DomainError("join of " + format(v) + " and " + format(w) + " left the search radius");
    return out;
}

std::optional<NormalForm> CoxeterGroup::join_by_search(const NormalForm& v, const NormalForm& w) const {
    std::vector<NormalForm> bounds;
    for (const NormalForm& u : ball(v.length() + w.length()))
        if (starts_with(v, u) && starts_with(w, u)) bounds.push_back(u);
    if (bounds.empty()) return std::nullopt;
    std::vector<NormalForm> minimal;
    for (const NormalForm& u : bounds) {
        bool is_min = true;
        for (const NormalForm& x : bounds)
            if (x != u && starts_with(x, u)) {
                is_min = false;
                break;
            }
        if (is_min) minimal.push_back(u);
    }
    if (minimal.size() != 1)
        throw DomainError("upper bounds of " + format(v) + " and " + format(w) + " have no unique minimum");
    return minimal.front();
}

NormalForm CoxeterGroup::meet(const NormalForm& v, const NormalForm& w) const {
    Word prefix;
    NormalForm a = v;
    NormalForm b = w;
    for (;;) {
        VertexMask common = first_letters(a) & first_letters(b);
        if (common == 0) break;
        VertexId s{static_cast<std::uint32_t>(std::countr_zero(common))};
        NormalForm gs = generator(s);
        a = multiply(gs, a);
        b = multiply(gs, b);
        prefix.push_back(s);
    }
    return reduce(prefix);
}

bool CoxeterGroup::commutes_with(const NormalForm& w, VertexId v) const {
    NormalForm g = generator(v);
    return multiply(w, g) == multiply(g, w);
}

std::vector<NormalForm> CoxeterGroup::ball(std::size_t depth, BallLimits limits) const {
    if (depth > limits.max_depth)
        throw ResourceError("ball depth " + std::to_string(depth) + " exceeds cap " +
                            std::to_string(limits.max_depth));
    std::vector<NormalForm> out{identity()};
    std::vector<NormalForm> sphere{identity()};
    for (std::size_t k = 0; k < depth; ++k) {
        std::set<NormalForm> next;
        for (const NormalForm& w : sphere) {
            VertexMask tail = last_letters(w);
            for (VertexId s : graph_.vertices()) {
                if ((tail & bit(s)) != 0) continue;
                Word x = w.letters;
                x.push_back(s);
                NormalForm y;
                for (std::size_t i : canonical_order(x)) y.letters.push_back(x[i]);
                next.insert(std::move(y));
            }
            if (out.size() + next.size() > limits.max_elements)
                throw ResourceError("ball exceeds " + std::to_string(limits.max_elements) + " elements");
        }
        sphere.assign(next.begin(), next.end());
        out.insert(out.end(), sphere.begin(), sphere.end());
    }
    return out;
}

std::vector<std::uint64_t> CoxeterGroup::sphere_sizes(std::size_t depth, BallLimits limits) const {
    std::vector<std::uint64_t> sizes(depth + 1, 0);
    for (const NormalForm& w : ball(depth, limits)) ++sizes[w.length()];
    return sizes;
}

NormalForm CoxeterGroup::parse(const std::vector<std::string>& names) const {
    Word w;
    for (const auto& n : names) w.push_back(graph_.id(n));
    return reduce(w);
}

std::vector<std::string> CoxeterGroup::names_of(const NormalForm& w) const {
    std::vector<std::string> out;
    for (VertexId v : w.letters) out.push_back(graph_.name(v));
    return out;
}

std::string CoxeterGroup::format(const NormalForm& w) const {
    if (w.is_identity()) return "e";
    bool short_names = std::all_of(graph_.names().begin(), graph_.names().end(),
                                   [](const std::string& n) { return n.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i > 0 && !short_names) out += '.';
        out += graph_.name(w.letters[i]);
    }
    return out;
}

}  // namespace gplab
