#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gplab/growth.hpp"
#include "gplab/vertex_algebra.hpp"

namespace gplab {

/// A vertex algebra with its state and optional simplicity witnesses.
struct VertexSpec {
    FiniteDimAlgebra algebra;
    StateSpec state;
    /// Centered element a with a a* >= q omega(a* a) 1.
    std::optional<AlgebraElement> a_witness;
    /// Unitary in the kernel of the state.
    std::optional<AlgebraElement> unitary_witness;
    /// Set when the vertex is a Hecke algebra with this parameter.
    std::optional<double> hecke_q;

    /// Two-dimensional Hecke vertex with its generator as the a witness.
    static VertexSpec hecke(double q);
};

/// The growth parameter q_v a vertex contributes, and where it came from:
/// the supplied a witness, the supplied unitary, or a small search.
struct VertexParameter {
    double q = 0.0;
    std::string source;
};

VertexParameter vertex_parameter(const VertexSpec& spec);

struct GraphProductProblem {
    SimplicialGraph graph;
    std::vector<VertexSpec> vertices;

    /// Throws DomainError on a missing vertex, a non-faithful state or a
    /// non-conformant witness.
    void validate() const;
    std::vector<GnsRep> reps() const;
    GraphProductProblem induced(VertexMask keep) const;
};

enum class Outcome { Established, HypothesesFail, Inconclusive };

std::string to_string(Outcome o);

struct Evidence {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct Verdict {
    std::string statement;
    Outcome result = Outcome::Inconclusive;
    std::string summary;
    std::vector<Evidence> evidence;
    /// Identifiers of the results relied upon.
    std::vector<std::string> citations;
    /// Join factors or sub-statements.
    std::vector<Verdict> parts;
};

struct SimplicityOptions {
    double growth_tolerance = 1e-8;
    double witness_tolerance = 1e-10;
};

/// Never claims non-simplicity: failure of a hypothesis yields HypothesesFail
/// or Inconclusive.
Verdict simplicity_report(const GraphProductProblem& p, SimplicityOptions options = {});

struct TracialityProbe {
    double max_deviation = 0.0;
    std::size_t pairs = 0;
};

/// |omega(x y) - omega(y x)| over random products x, y of at most two vertex
/// operators each, on a Fock space of the given depth (at least 4).
TracialityProbe traciality_probe(const GraphProductProblem& p, std::size_t depth, std::size_t samples,
                                 std::uint64_t seed);

struct TraceOptions {
    std::size_t probe_depth = 4;
    std::size_t probe_samples = 100;
    std::uint64_t seed = 1;
    double tracial_tolerance = 1e-10;
    /// A probe deviation above this counts as a detected violation.
    double violation_threshold = 1e-3;
};

Verdict trace_report(const GraphProductProblem& p, TraceOptions options = {});

Verdict nuclearity_exactness_report(const GraphProductProblem& p);

}  // namespace gplab
