#include "gplab/identity_suite.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>

#include "gplab/boundary.hpp"
#include "gplab/rewrite.hpp"

namespace gplab {

namespace {

using Space = std::shared_ptr<const TruncatedFock>;

/// Dense checks are skipped above this Fock dimension.
constexpr std::size_t dense_limit = 1500;

struct Context {
    Space f;
    std::vector<GnsRep> reps;
    const SuiteOptions& options;
    std::mt19937_64 rng;

    const SimplicialGraph& graph() const { return f->graph(); }
    const CoxeterGroup& group() const { return f->group(); }
    std::size_t n() const { return f->graph().size(); }

    CMatrix element(VertexId v) { return reps[v.index].left_mult(AlgebraElement::random(reps[v.index].algebra(), rng)); }
    CMatrix centered_element(VertexId v) { return centered_matrix(element(v)); }
    VertexId vertex() { return VertexId{static_cast<std::uint32_t>(rng() % n())}; }
};

struct Skip {
    std::string reason;
};

VertexId vid(std::size_t i) { return VertexId{static_cast<std::uint32_t>(i)}; }

OperatorMatrix random_word_operator(Context& c, std::size_t letters) {
    OperatorMatrix x = OperatorMatrix::identity(c.f);
    for (std::size_t k = 0; k < letters; ++k) {
        const VertexId v = c.vertex();
        x = x * lambda_op(c.f, v, c.element(v));
    }
    return x;
}

CMatrix guarded_dense(const OperatorMatrix& x) {
    const TruncatedFock& f = x.space();
    std::vector<Eigen::Index> keep;
    for (std::size_t p = 0; p < f.dim(); ++p)
        if (static_cast<int>(f.length_at(p)) <= x.guard()) keep.push_back(static_cast<Eigen::Index>(p));
    const CMatrix d = x.dense();
    CMatrix out(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = d(keep[i], keep[j]);
    return out;
}

double negative_part(const OperatorMatrix& hermitian) {
    if (hermitian.space().dim() > dense_limit) throw Skip{"Fock dimension above the dense limit"};
    if (hermitian.guard() < 0) return 0.0;
    return std::max(0.0, -min_eigenvalue(guarded_dense(hermitian)));
}

ElementTable element_table(Context& c) {
    ElementTable t;
    for (std::size_t i = 0; i < c.n(); ++i) {
        t.vertex_dims.push_back(c.reps[i].dim());
        std::vector<CMatrix> list{c.element(vid(i)), c.element(vid(i)), c.centered_element(vid(i)),
                                  CMatrix::Identity(c.reps[i].dim(), c.reps[i].dim())};
        t.by_vertex.push_back(std::move(list));
    }
    return t;
}

Expression random_expression(Context& c, const ElementTable& t) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Expression e;
    const std::size_t length = 1 + c.rng() % c.options.max_expression_length;
    for (std::size_t i = 0; i < length; ++i) {
        Generator g;
        g.kind = static_cast<GeneratorKind>(c.rng() % 6);
        g.vertex = c.vertex();
        g.element = c.rng() % t.by_vertex[g.vertex.index].size();
        g.scalar = {u(c.rng), u(c.rng)};
        e.factors.push_back(g);
    }
    return e;
}

RewriteLimits rewrite_limits(const SuiteOptions& options) {
    RewriteLimits limits;
    limits.corrupt_contraction = options.fault == SuiteFault::RewriteContraction;
    return limits;
}

/// Runs f over every ordered vertex pair accepted by `keep`.
double over_pairs(Context& c, const std::function<bool(VertexId, VertexId)>& keep,
                  const std::function<double(VertexId, VertexId)>& f) {
    double worst = 0.0;
    bool any = false;
    for (std::size_t v = 0; v < c.n(); ++v)
        for (std::size_t u = 0; u < c.n(); ++u) {
            if (!keep(vid(v), vid(u))) continue;
            any = true;
            for (std::size_t d = 0; d < c.options.draws; ++d) worst = std::max(worst, f(vid(v), vid(u)));
        }
    if (!any) throw Skip{"no vertex pair of this kind"};
    return worst;
}

double creation_same_vertex(Context& c) {
    return over_pairs(c, [](VertexId v, VertexId u) { return v == u; },
                      [&](VertexId v, VertexId) {
                          auto ad = creation(c.f, v, c.element(v));
                          auto bd = creation(c.f, v, c.element(v));
                          auto da = diagonal(c.f, v, c.element(v));
                          return std::max(guarded_norm(ad * bd), guarded_norm(bd * da));
                      });
}

double diagonal_creation(Context& c) {
    return over_pairs(c, [](VertexId v, VertexId u) { return v == u; },
                      [&](VertexId v, VertexId) {
                          CMatrix a = c.element(v);
                          CMatrix b = c.element(v);
                          return guarded_deviation(diagonal(c.f, v, a) * creation(c.f, v, b),
                                                   creation(c.f, v, a * b - vertex_state(b) * a));
                      });
}

double creation_adjoint(Context& c) {
    return over_pairs(c, [](VertexId v, VertexId u) { return v == u; },
                      [&](VertexId v, VertexId) {
                          CMatrix a = c.element(v);
                          CMatrix b = c.element(v);
                          auto lhs = creation(c.f, v, a) * creation(c.f, v, b).adjoint();
                          auto rhs = diagonal(c.f, v, a * b.adjoint()) - diagonal(c.f, v, a) * diagonal(c.f, v, b.adjoint());
                          return guarded_deviation(lhs, rhs);
                      });
}

double annihilation_creation(Context& c) {
    return over_pairs(c, [](VertexId v, VertexId u) { return v == u; },
                      [&](VertexId v, VertexId) {
                          CMatrix a = c.element(v);
                          CMatrix b = c.element(v);
                          const Complex k =
                              vertex_state(a.adjoint() * b) - std::conj(vertex_state(a)) * vertex_state(b);
                          auto perp = OperatorMatrix::identity(c.f) - q_projection(c.f, c.group().generator(v));
                          return guarded_deviation(creation(c.f, v, a).adjoint() * creation(c.f, v, b), k * perp);
                      });
}

double adjacent_commutation(Context& c) {
    return over_pairs(c, [&](VertexId v, VertexId u) { return c.graph().adjacent(v, u); },
                      [&](VertexId v, VertexId u) {
                          auto ad = creation(c.f, v, c.element(v));
                          auto bd = creation(c.f, u, c.element(u));
                          auto da = diagonal(c.f, v, c.element(v));
                          auto db = diagonal(c.f, u, c.element(u));
                          return std::max({guarded_deviation(ad * bd, bd * ad), guarded_deviation(da * bd, bd * da),
                                           guarded_deviation(ad.adjoint() * bd, bd * ad.adjoint()),
                                           guarded_deviation(da * db, db * da)});
                      });
}

double nonadjacent_vanishing(Context& c) {
    return over_pairs(c, [&](VertexId v, VertexId u) { return v != u && !c.graph().adjacent(v, u); },
                      [&](VertexId v, VertexId u) {
                          auto ad = creation(c.f, v, c.element(v));
                          auto bd = creation(c.f, u, c.element(u));
                          auto da = diagonal(c.f, v, c.element(v));
                          auto db = diagonal(c.f, u, c.element(u));
                          return std::max({guarded_norm(da * bd), guarded_norm(ad.adjoint() * bd),
                                           guarded_norm(da * db)});
                      });
}

double q_action(Context& c) {
    double worst = 0.0;
    const auto words = c.group().ball(std::min<std::size_t>(2, c.f->depth()));
    for (std::size_t v = 0; v < c.n(); ++v)
        for (const auto& w : words) {
            auto ad = creation(c.f, vid(v), c.centered_element(vid(v)));
            auto qw = materialize(c.f, QSymbolic::single(w));
            auto acted = materialize(c.f, act_on_Q(c.group(), vid(v), w));
            worst = std::max({worst, guarded_deviation(qw * ad, ad * acted),
                              guarded_deviation(qw * ad.adjoint(), ad.adjoint() * acted)});
        }
    return worst;
}

double gauge_covariance(Context& c) {
    const auto table = element_table(c);
    std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
    double worst = 0.0;
    for (std::size_t k = 0; k < c.options.expressions; ++k) {
        const auto e = random_expression(c, table);
        std::vector<Complex> z;
        for (std::size_t i = 0; i < c.n(); ++i) z.push_back(std::polar(1.0, angle(c.rng)));
        const auto u = gauge_unitary(c.f, z);
        for (const auto& term : rewrite_to_elementary(c.group(), e, table, rewrite_limits(c.options))) {
            Complex factor = 1.0;
            for (const auto& l : term.creations) factor *= z[l.vertex.index];
            for (const auto& l : term.annihilations) factor /= z[l.vertex.index];
            const auto x = materialize(c.f, term);
            worst = std::max(worst, guarded_deviation(u * x * u.adjoint(), factor * x));
        }
    }
    return worst;
}

double expectation(Context& c) {
    double worst = 0.0;
    for (std::size_t k = 0; k < c.options.draws; ++k) {
        const auto x = random_word_operator(c, 1 + c.rng() % 2);
        const auto ex = expectation_diag(x);
        worst = std::max(worst, guarded_deviation(expectation_diag(ex), ex));
        worst = std::max(worst, guarded_deviation(gauge_average(x, 2 * c.f->depth() + 1), ex));
        worst = std::max(worst, negative_part(expectation_diag(x.adjoint() * x)));
    }
    return worst;
}

double expectation_faithful(Context& c) {
    double failures = 0.0;
    std::size_t tested = 0;
    for (std::size_t k = 0; k < c.options.draws; ++k) {
        const auto x = random_word_operator(c, 1 + c.rng() % 2);
        const auto xx = x.adjoint() * x;
        // Below this the guarded subspace of x* x is empty.
        if (xx.guard() < 0 || guarded_norm(x) < 1e-12) continue;
        ++tested;
        if (guarded_norm(expectation_diag(xx)) <= 1e-12) failures += 1.0;
    }
    if (tested == 0) throw Skip{"truncation too shallow for x* x"};
    return failures;
}

double diagonality(Context& c) {
    const auto table = element_table(c);
    double mismatches = 0.0;
    for (std::size_t k = 0; k < c.options.expressions; ++k) {
        const auto e = random_expression(c, table);
        for (const auto& term : rewrite_to_elementary(c.group(), e, table, rewrite_limits(c.options))) {
            const auto x = materialize(c.f, term);
            if (guarded_norm(x) <= c.options.tolerance) continue;
            if (is_block_diagonal(x) != signature(c.group(), term).is_identity()) mismatches += 1.0;
        }
    }
    return mismatches;
}

double conjugation_action(Context& c) {
    double worst = 0.0;
    const auto one = OperatorMatrix::identity(c.f);
    for (std::size_t v = 0; v < c.n(); ++v) {
        const CMatrix a = c.centered_element(vid(v));
        const auto la = lambda_op(c.f, vid(v), a);
        const double w = vertex_state(a * a.adjoint()).real();
        const auto qv = q_projection(c.f, c.group().generator(vid(v)));
        worst = std::max(worst, negative_part(w * qv - la.adjoint() * (one - qv) * la));
        for (const auto& word : c.group().ball(std::min<std::size_t>(2, c.f->depth()))) {
            if (word.is_identity() || c.group().commutes_with(word, vid(v)) || c.group().starts_with(vid(v), word))
                continue;
            const auto rhs = w * q_projection(c.f, c.group().multiply(c.group().generator(vid(v)), word));
            worst = std::max(worst, negative_part(rhs - la.adjoint() * q_projection(c.f, word) * la));
        }
    }
    return worst;
}

double finite_rank_tail(Context& c) {
    double worst = 0.0;
    for (const auto& w : c.group().ball(1)) {
        const auto profile = tail_profile(p_projection(c.f, w));
        for (std::size_t k = w.length(); k < profile.size(); ++k) worst = std::max(worst, profile[k]);
    }
    return worst;
}

double subgraph_expectation(Context& c) {
    if (c.n() < 2) throw Skip{"needs at least two vertices"};
    const VertexMask keep = c.graph().all() & ~bit(vid(c.n() - 1));
    double worst = 0.0;
    for (std::size_t k = 0; k < c.options.draws; ++k) {
        const VertexId inside{static_cast<std::uint32_t>(c.rng() % (c.n() - 1))};
        const auto x = lambda_op(c.f, inside, c.element(inside));
        worst = std::max(worst, guarded_deviation(expectation_subgraph(x, keep), x));
        const VertexId outside = vid(c.n() - 1);
        const auto y = lambda_op(c.f, outside, c.centered_element(outside));
        worst = std::max(worst, guarded_norm(expectation_subgraph(y, keep)));
    }
    return worst;
}

double rewrite_certificate(Context& c) {
    const auto table = element_table(c);
    double worst = 0.0;
    for (std::size_t k = 0; k < c.options.expressions; ++k) {
        const auto e = random_expression(c, table);
        const auto terms = rewrite_to_elementary(c.group(), e, table, rewrite_limits(c.options));
        worst = std::max(worst, certify_rewrite(c.f, e, table, terms).deviation);
    }
    return worst;
}

double tensor_split(Context& c) {
    const auto factors = join_factor_masks(c.graph());
    if (factors.size() < 2) throw Skip{"graph is not a join"};
    return tensor_split_check(c.graph(), factors.front(), c.reps, c.f->depth()).max_deviation;
}

struct Registered {
    const char* name;
    double (*run)(Context&);
};

constexpr Registered registry[] = {
    {"creation_same_vertex", creation_same_vertex},
    {"diagonal_creation", diagonal_creation},
    {"creation_adjoint", creation_adjoint},
    {"annihilation_creation", annihilation_creation},
    {"adjacent_commutation", adjacent_commutation},
    {"nonadjacent_vanishing", nonadjacent_vanishing},
    {"q_action", q_action},
    {"gauge_covariance", gauge_covariance},
    {"expectation", expectation},
    {"expectation_faithful", expectation_faithful},
    {"diagonality", diagonality},
    {"conjugation_action", conjugation_action},
    {"finite_rank_tail", finite_rank_tail},
    {"subgraph_expectation", subgraph_expectation},
    {"rewrite_certificate", rewrite_certificate},
    {"tensor_split", tensor_split},
};

}  // namespace

bool SuiteReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.skipped || c.passed; });
}

SuiteReport identity_suite(const GraphProductProblem& p, const SuiteOptions& options) {
    p.validate();
    SuiteReport report;
    const auto reps = p.reps();
    Space f;
    std::string build_failure;
    try {
        f = build_fock(p.graph, reps, options.depth, options.caps);
    } catch (const ResourceError& e) {
        build_failure = e.what();
    }
    std::uint64_t index = 0;
    for (const auto& entry : registry) {
        CheckRecord record;
        record.name = entry.name;
        record.tolerance = options.tolerance;
        record.seed = options.seed + index++;
        if (!f) {
            record.skipped = true;
            record.capped = true;
            record.reason = build_failure;
            report.checks.push_back(std::move(record));
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Context c{f, reps, options, std::mt19937_64(record.seed)};
        try {
            record.max_deviation = entry.run(c);
            record.passed = record.max_deviation <= options.tolerance;
        } catch (const Skip& s) {
            record.skipped = true;
            record.reason = s.reason;
        } catch (const ResourceError& e) {
            record.skipped = true;
            record.capped = true;
            record.reason = e.what();
        } catch (const DomainError& e) {
            // The truncation is too shallow for the operators this check needs.
            record.skipped = true;
            record.reason = e.what();
        }
        record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.checks.push_back(std::move(record));
    }
    return report;
}

}  // namespace gplab
