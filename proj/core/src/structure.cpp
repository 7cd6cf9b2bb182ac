#include "gplab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gplab/fock.hpp"

namespace gplab {

namespace {

Evidence check(std::string name, double value, double tolerance, bool passed) {
    return Evidence{std::move(name), value, tolerance, passed};
}

Evidence flag(std::string name, bool passed) { return check(std::move(name), passed ? 1.0 : 0.0, 0.0, passed); }

}  // namespace

VertexParameter vertex_parameter(const VertexSpec& spec) {
    auto score = [&](const AlgebraElement& a) {
        if (a.norm() < 1e-12) return 0.0;
        return optimal_q(a, spec.state);
    };
    if (spec.a_witness) return {score(*spec.a_witness), "supplied"};
    if (spec.unitary_witness) return {score(*spec.unitary_witness), "supplied unitary"};
    VertexParameter best{0.0, "search"};
    if (auto u = centered_unitary_search(spec.algebra, spec.state)) best.q = score(u->unitary);
    for (const auto& e : matrix_units(spec.algebra)) best.q = std::max(best.q, score(centered(e, spec.state)));
    return best;
}

namespace {

Outcome aggregate(const std::vector<Verdict>& parts) {
    if (std::all_of(parts.begin(), parts.end(), [](const Verdict& v) { return v.result == Outcome::Established; }))
        return Outcome::Established;
    if (std::any_of(parts.begin(), parts.end(), [](const Verdict& v) { return v.result == Outcome::HypothesesFail; }))
        return Outcome::HypothesesFail;
    return Outcome::Inconclusive;
}

CMatrix random_operator(const GnsRep& rep, std::mt19937_64& rng) {
    return rep.left_mult(AlgebraElement::random(rep.algebra(), rng));
}

Verdict single_factor_simplicity(const GraphProductProblem& p, const SimplicityOptions& options) {
    const SimplicialGraph& g = p.graph;
    Verdict out;
    out.statement = "simplicity";
    const bool enough = g.size() >= 3;
    const bool connected = complement(g).is_connected();
    out.evidence.push_back(check("vertex_count", static_cast<double>(g.size()), 3.0, enough));
    out.evidence.push_back(flag("complement_connected", connected));
    if (!enough || !connected) {
        out.result = Outcome::Inconclusive;
        out.summary = "the criteria need at least three vertices and a connected complement";
        return out;
    }

    bool all_central = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const VertexSpec& spec = p.vertices[i];
        const std::string name = g.name(VertexId{static_cast<std::uint32_t>(i)});
        if (!spec.unitary_witness) {
            all_central = false;
            continue;
        }
        const bool central = is_state_central(spec.algebra, spec.state, *spec.unitary_witness);
        out.evidence.push_back(
            check("unitary_state_value[" + name + "]", std::abs(spec.state.evaluate(*spec.unitary_witness)),
                  options.witness_tolerance, true));
        out.evidence.push_back(flag("unitary_central[" + name + "]", central));
        all_central = all_central && central;
    }

    if (all_central) {
        out.result = Outcome::Established;
        out.citations = {"simplicity/central-unitaries"};
        out.summary = "simple; the inclusion into the boundary quotient is C*-irreducible";
        return out;
    }

    std::vector<double> q(g.size(), 0.0);
    bool positive = true;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto w = vertex_parameter(p.vertices[i]);
        q[i] = w.q;
        positive = positive && w.q > 0.0;
        out.evidence.push_back(check("q[" + g.name(VertexId{static_cast<std::uint32_t>(i)}) + "] " + w.source, w.q,
                                     0.0, w.q > 0.0));
    }
    std::optional<ConvergenceVerdict> growth;
    if (positive) {
        growth = classify(GrowthData(g, q), options.growth_tolerance);
        out.evidence.push_back(check("critical_t", growth->critical_t, options.growth_tolerance,
                                     growth->verdict == Convergence::OutsideClosure));
    }

    if (!positive) {
        out.result = Outcome::HypothesesFail;
        out.summary = "some vertex has no centered element with a a* bounded below; the criterion does not apply";
        return out;
    }
    if (growth->verdict != Convergence::OutsideClosure) {
        out.result = Outcome::HypothesesFail;
        out.summary = "the parameters q are " + to_string(growth->verdict) +
                      " for the growth series (ray test, clique polynomial " + clique_polynomial(g) +
                      "); the criterion does not apply";
        return out;
    }
    // Every vertex algebra here is finite-dimensional with a faithful state.
    out.result = Outcome::Established;
    out.citations = {"simplicity/finite-dimensional"};
    out.summary = "simple; the inclusion into the boundary quotient is C*-irreducible";
    return out;
}

}  // namespace

VertexSpec VertexSpec::hecke(double q) {
    const auto h = hecke_vertex(q);
    VertexSpec out;
    out.algebra = h.algebra;
    out.state = h.state;
    out.a_witness = h.generator;
    out.hecke_q = q;
    return out;
}

void GraphProductProblem::validate() const {
    if (vertices.size() != graph.size()) throw DomainError("every vertex needs an algebra");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const VertexSpec& v = vertices[i];
        const std::string name = graph.name(VertexId{static_cast<std::uint32_t>(i)});
        v.state.validate(v.algebra);
        if (!v.state.is_faithful()) throw DomainError("state of vertex " + name + " is not faithful");
        if (v.a_witness) {
            if (!v.a_witness->conforms_to(v.algebra)) throw DomainError("witness a of vertex " + name + " does not conform");
            if (std::abs(v.state.evaluate(*v.a_witness)) > 1e-10)
                throw DomainError("witness a of vertex " + name + " is not centered");
            if (v.a_witness->norm() < 1e-12) throw DomainError("witness a of vertex " + name + " is zero");
        }
        if (v.unitary_witness) {
            if (!v.unitary_witness->conforms_to(v.algebra))
                throw DomainError("unitary witness of vertex " + name + " does not conform");
            if (!is_unitary(*v.unitary_witness)) throw DomainError("witness of vertex " + name + " is not unitary");
            if (std::abs(v.state.evaluate(*v.unitary_witness)) > 1e-10)
                throw DomainError("unitary witness of vertex " + name + " is not centered");
        }
    }
}

std::vector<GnsRep> GraphProductProblem::reps() const {
    std::vector<GnsRep> out;
    out.reserve(vertices.size());
    for (const auto& v : vertices) out.push_back(gns(v.algebra, v.state));
    return out;
}

GraphProductProblem GraphProductProblem::induced(VertexMask keep) const {
    GraphProductProblem out;
    out.graph = graph.induced(keep);
    for (VertexId v : members(keep)) out.vertices.push_back(vertices.at(v.index));
    return out;
}

std::string to_string(Outcome o) {
    switch (o) {
    case Outcome::Established: return "Established";
    case Outcome::HypothesesFail: return "HypothesesFail";
    case Outcome::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Verdict simplicity_report(const GraphProductProblem& p, SimplicityOptions options) {
    p.validate();
    const auto factors = join_factor_masks(p.graph);
    if (factors.size() <= 1) return single_factor_simplicity(p, options);

    Verdict out;
    out.statement = "simplicity";
    out.citations = {"simplicity/graph-join"};
    out.evidence.push_back(check("join_factors", static_cast<double>(factors.size()), 0.0, true));
    for (VertexMask f : factors) out.parts.push_back(simplicity_report(p.induced(f), options));
    out.result = aggregate(out.parts);
    out.summary = "graph join: the graph product is the tensor product of the factor products and is simple "
                  "exactly when every factor is";
    if (out.result != Outcome::Established) out.summary += "; not every factor is established";
    return out;
}

TracialityProbe traciality_probe(const GraphProductProblem& p, std::size_t depth, std::size_t samples,
                                 std::uint64_t seed) {
    if (depth < 4) throw DomainError("the traciality probe needs depth at least 4");
    const auto reps = p.reps();
    auto f = build_fock(p.graph, reps, depth);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(p.graph.size() - 1));
    auto draw = [&] {
        OperatorMatrix x = OperatorMatrix::identity(f);
        const int letters = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < letters; ++k) {
            const VertexId v{pick(rng)};
            x = x * lambda_op(f, v, random_operator(reps[v.index], rng));
        }
        return x;
    };
    TracialityProbe out;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = draw();
        const auto y = draw();
        const double dev = std::abs(vacuum_eval(x * y) - vacuum_eval(y * x));
        out.max_deviation = std::max(out.max_deviation, dev);
        ++out.pairs;
    }
    return out;
}

Verdict trace_report(const GraphProductProblem& p, TraceOptions options) {
    p.validate();
    Verdict out;
    out.statement = "trace";
    bool all_unitaries = true;
    bool all_tracial = true;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        const VertexSpec& spec = p.vertices[i];
        const std::string name = p.graph.name(VertexId{static_cast<std::uint32_t>(i)});
        std::optional<AlgebraElement> u = spec.unitary_witness;
        if (!u)
            if (auto found = centered_unitary_search(spec.algebra, spec.state)) u = found->unitary;
        out.evidence.push_back(flag("unitary_in_kernel[" + name + "]", u.has_value()));
        all_unitaries = all_unitaries && u.has_value();
        const bool tracial = spec.state.is_tracial(spec.algebra);
        out.evidence.push_back(flag("state_tracial[" + name + "]", tracial));
        all_tracial = all_tracial && tracial;
    }
    if (!all_unitaries) {
        out.result = Outcome::Inconclusive;
        out.summary = "no unitary in the kernel of the state was found in the search family for some vertex";
        return out;
    }
    const auto probe = traciality_probe(p, options.probe_depth, options.probe_samples, options.seed);
    const bool agrees = all_tracial ? probe.max_deviation <= options.tracial_tolerance
                                    : probe.max_deviation > options.violation_threshold;
    out.evidence.push_back(check("traciality_probe", probe.max_deviation,
                                 all_tracial ? options.tracial_tolerance : options.violation_threshold, agrees));
    if (!agrees) {
        out.result = Outcome::Inconclusive;
        out.summary = "the truncated traciality probe disagrees with the vertex states";
        return out;
    }
    out.result = Outcome::Established;
    if (all_tracial) {
        out.citations = {"trace/unique"};
        out.summary = "the graph product state is the unique tracial state";
    } else {
        out.citations = {"trace/none"};
        out.summary = "the graph product admits no tracial state";
    }
    return out;
}

Verdict nuclearity_exactness_report(const GraphProductProblem& p) {
    p.validate();
    const auto reps = p.reps();
    Verdict out;
    out.statement = "nuclearity-exactness";

    std::vector<Evidence> dims;
    std::vector<Evidence> commutants;
    bool all_trivial = true;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const std::string name = p.graph.name(VertexId{static_cast<std::uint32_t>(i)});
        dims.push_back(check("dimension[" + name + "]", static_cast<double>(p.vertices[i].algebra.dimension()), 0.0,
                             true));
        const auto c = commutant_dimension(reps[i]);
        commutants.push_back(check("commutant_dimension[" + name + "]", static_cast<double>(c), 1.0, c == 1));
        all_trivial = all_trivial && c == 1;
    }

    auto part = [&](std::string statement, std::string citation, std::string summary) {
        Verdict v;
        v.statement = std::move(statement);
        v.result = Outcome::Established;
        v.citations = {std::move(citation)};
        v.summary = std::move(summary);
        v.evidence = dims;
        return v;
    };
    out.parts.push_back(part("extended/nuclear", "nuclearity/extended-algebra",
                             "finite-dimensional vertex algebras are nuclear, hence so is the extended algebra"));
    out.parts.push_back(part("extended/exact", "exactness/extended-algebra",
                             "finite-dimensional vertex algebras are exact, hence so is the extended algebra"));
    out.parts.push_back(part("graph_product/exact", "exactness/graph-product",
                             "the graph product is a subalgebra of an exact algebra"));
    Verdict nuclear;
    nuclear.statement = "graph_product/nuclear";
    nuclear.evidence = commutants;
    if (all_trivial) {
        nuclear.result = Outcome::Established;
        nuclear.citations = {"nuclearity/graph-product"};
        nuclear.summary = "every vertex algebra is all of B(H_v), so the graph product equals the nuclear extended "
                          "algebra";
    } else {
        nuclear.result = Outcome::Inconclusive;
        nuclear.summary = "some vertex algebra does not contain the compact operators on its GNS space; nuclearity "
                          "of the graph product is not decided (the extended algebra is nuclear)";
    }
    out.parts.push_back(std::move(nuclear));
    out.result = Outcome::Established;
    out.summary = "extended algebra nuclear and exact; graph product exact";
    if (p.graph.size() == 1) out.summary += "; single vertex, the Fock space is the GNS space itself";
    return out;
}

}  // namespace gplab
