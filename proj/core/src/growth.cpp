#include "gplab/growth.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

#include "gplab/coxeter.hpp"
#include "gplab/errors.hpp"

namespace gplab {

namespace {

using boost::multiprecision::cpp_int;

using CliqueList = std::vector<std::vector<std::uint32_t>>;

CliqueList cliques_within(const std::vector<VertexMask>& cliques, VertexMask within) {
    CliqueList out;
    for (VertexMask c : cliques) {
        if ((c & ~within) != 0) continue;
        auto& list = out.emplace_back();
        for (VertexId s : members(c)) list.push_back(s.index);
    }
    return out;
}

double clique_sum(const CliqueList& cliques, std::span<const double> q, double t) {
    double sum = 0.0;
    for (const auto& c : cliques) {
        double term = 1.0;
        for (auto s : c) term *= -t * q[s] / (1.0 + t * q[s]);
        sum += term;
    }
    return sum;
}

double clique_sum_derivative(const CliqueList& cliques, std::span<const double> q, double t) {
    double sum = 0.0;
    for (const auto& c : cliques) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double qi = q[c[i]];
            double term = -qi / ((1.0 + t * qi) * (1.0 + t * qi));
            for (std::size_t j = 0; j < c.size(); ++j)
                if (j != i) term *= -t * q[c[j]] / (1.0 + t * q[c[j]]);
            sum += term;
        }
    }
    return sum;
}

template <class F>
double bisect(F&& sign_source, double lo, double hi, double rel_tol) {
    const bool lo_positive = sign_source(lo) > 0.0;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if ((sign_source(mid) > 0.0) == lo_positive) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Critical parameter of a factor with connected complement and at least two
/// vertices. Such a factor contains an infinite dihedral group, so a root
/// exists; the scan cap only guards against misuse.
double factor_critical(const std::vector<VertexMask>& cliques, VertexMask factor, std::span<const double> q,
                       const CriticalLimits& limits) {
    double q_max = 0.0;
    for (VertexId s : members(factor)) q_max = std::max(q_max, q[s.index]);
    const CliqueList within = cliques_within(cliques, factor);
    auto f = [&](double t) { return clique_sum(within, q, t); };
    auto df = [&](double t) { return clique_sum_derivative(within, q, t); };

    double before = 0.0;
    double prev = 1e-6 / q_max;
    double prev_value = f(prev);
    for (double t = prev * limits.grid_ratio; t * q_max <= limits.scan_cap; t *= limits.grid_ratio) {
        const double value = f(t);
        if (value <= 0.0) return bisect(f, prev, t, limits.relative_tolerance);
        // A root of even order shows up as the first rise.
        if (value > prev_value && before > 0.0 && df(before) < 0.0 && df(t) > 0.0)
            return bisect(df, before, t, limits.relative_tolerance);
        before = prev;
        prev = t;
        prev_value = value;
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<cpp_int> binomial_row(std::size_t m) {
    std::vector<cpp_int> row{1};
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<cpp_int> next(row.size() + 1, 0);
        for (std::size_t i = 0; i < row.size(); ++i) {
            next[i] += row[i];
            next[i + 1] += row[i];
        }
        row = std::move(next);
    }
    return row;
}

}  // namespace

GrowthData::GrowthData(SimplicialGraph g, std::vector<double> q) : graph_(std::move(g)), q_(std::move(q)) {
    if (q_.size() != graph_.size()) throw DomainError("one growth parameter per vertex is required");
    for (double x : q_)
        if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("growth parameters must be positive and finite");
    cliques_ = gplab::cliques(graph_);
}

std::string clique_polynomial(const SimplicialGraph& g) {
    std::string out;
    for (VertexMask c : cliques(g)) {
        const auto vs = members(c);
        if (vs.empty()) {
            out = "1";
            continue;
        }
        out += vs.size() % 2 == 1 ? " - " : " + ";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i > 0) out += " ";
            out += "y_" + g.name(vs[i]);
        }
    }
    return out;
}

double inverse_growth_eval(const GrowthData& data) {
    return clique_sum(cliques_within(data.cliques(), data.graph().all()), data.q(), 1.0);
}

double inverse_growth_eval(const SimplicialGraph& g, std::span<const double> q) {
    return inverse_growth_eval(GrowthData(g, std::vector<double>(q.begin(), q.end())));
}

std::vector<std::uint64_t> growth_taylor(const SimplicialGraph& g, std::size_t depth) {
    // 1/f(z) = (1+z)^m / P(z) with P(z) = sum_k c_k (-z)^k (1+z)^(m-k),
    // c_k the number of k-cliques and m the largest clique size.
    std::vector<std::size_t> counts;
    for (VertexMask c : cliques(g)) {
        const auto k = members(c).size();
        if (counts.size() <= k) counts.resize(k + 1, 0);
        ++counts[k];
    }
    const std::size_t m = counts.size() - 1;
    std::vector<cpp_int> p(m + 1, 0);
    for (std::size_t k = 0; k <= m; ++k) {
        const auto row = binomial_row(m - k);
        for (std::size_t i = 0; i < row.size(); ++i) {
            cpp_int term = row[i] * counts[k];
            if (k % 2 == 1) term = -term;
            p[k + i] += term;
        }
    }
    auto numerator = binomial_row(m);
    numerator.resize(std::max(numerator.size(), depth + 1), 0);

    std::vector<cpp_int> series(depth + 1, 0);
    std::vector<std::uint64_t> out(depth + 1, 0);
    for (std::size_t n = 0; n <= depth; ++n) {
        cpp_int c = numerator[n];
        for (std::size_t k = 1; k <= std::min(n, m); ++k) c -= p[k] * series[n - k];
        series[n] = c;  // p[0] == 1
        if (c < 0 || c > std::numeric_limits<std::uint64_t>::max())
            throw ResourceError("growth series coefficient out of 64-bit range");
        out[n] = static_cast<std::uint64_t>(c);
    }
    return out;
}

std::vector<std::uint64_t> sphere_counts(const SimplicialGraph& g, std::size_t depth, BallLimits limits) {
    return CoxeterGroup(g).sphere_sizes(depth, limits);
}

double critical_t(const GrowthData& data, CriticalLimits limits) {
    // The clique sum of a join is the product of the factor sums.
    double best = std::numeric_limits<double>::infinity();
    for (VertexMask factor : join_factor_masks(data.graph())) {
        if (members(factor).size() < 2) continue;  // a single vertex gives a finite factor
        best = std::min(best, factor_critical(data.cliques(), factor, data.q(), limits));
    }
    return best;
}

std::string to_string(Convergence c) {
    switch (c) {
    case Convergence::InsideRegion: return "InsideRegion";
    case Convergence::Boundary: return "Boundary";
    case Convergence::OutsideClosure: return "OutsideClosure";
    }
    return "Boundary";
}

ConvergenceVerdict classify(const GrowthData& data, double tol) {
    ConvergenceVerdict out;
    out.tolerance = tol;
    out.critical_t = critical_t(data);
    if (out.critical_t < 1.0 - tol) out.verdict = Convergence::OutsideClosure;
    else if (out.critical_t > 1.0 + tol) out.verdict = Convergence::InsideRegion;
    else out.verdict = Convergence::Boundary;
    return out;
}

PartialSumCheck partial_sum_check(const GrowthData& data, const ConvergenceVerdict& verdict, std::size_t depth) {
    PartialSumCheck out;
    CoxeterGroup grp(data.graph());
    out.sphere_weights.assign(depth + 1, 0.0);
    for (const auto& w : grp.ball(depth)) {
        double weight = 1.0;
        for (VertexId s : w.letters) weight *= data.q()[s.index];
        out.sphere_weights[w.length()] += weight;
    }
    if (depth > 0 && out.sphere_weights[depth - 1] > 0.0)
        out.last_ratio = out.sphere_weights[depth] / out.sphere_weights[depth - 1];
    if (verdict.verdict == Convergence::OutsideClosure) out.agrees = out.last_ratio > 1.0;
    else if (verdict.verdict == Convergence::InsideRegion) out.agrees = out.last_ratio < 1.0;
    return out;
}

}  // namespace gplab
