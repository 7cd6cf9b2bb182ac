#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gplab/coxeter.hpp"
#include "gplab/graph.hpp"

namespace gplab {

/// A graph with one positive parameter per vertex.
class GrowthData {
public:
    /// Throws DomainError unless q has one positive entry per vertex.
    GrowthData(SimplicialGraph g, std::vector<double> q);

    const SimplicialGraph& graph() const { return graph_; }
    const std::vector<double>& q() const { return q_; }
    const std::vector<VertexMask>& cliques() const { return cliques_; }

private:
    SimplicialGraph graph_;
    std::vector<double> q_;
    std::vector<VertexMask> cliques_;
};

/// The sum over cliques T of prod_{s in T} (-y_s), y_s = q_s / (1 + q_s),
/// with the y_s written out by vertex name.
std::string clique_polynomial(const SimplicialGraph& g);

/// Reciprocal of the growth series at q where it converges.
double inverse_growth_eval(const GrowthData& data);
double inverse_growth_eval(const SimplicialGraph& g, std::span<const double> q);

/// Taylor coefficients of the one-variable growth series up to z^depth,
/// computed exactly. Throws ResourceError if a coefficient overflows 64 bits.
std::vector<std::uint64_t> growth_taylor(const SimplicialGraph& g, std::size_t depth);

/// Number of group elements of each length 0..depth.
/// Throws ResourceError when the ball exceeds the limits.
std::vector<std::uint64_t> sphere_counts(const SimplicialGraph& g, std::size_t depth, BallLimits limits = {});

struct CriticalLimits {
    /// Largest t * max(q) tried before concluding the group is finite.
    double scan_cap = 1e9;
    double grid_ratio = 1.01;
    double relative_tolerance = 1e-10;
};

/// Smallest t > 0 with inverse_growth_eval(t q) = 0, or +infinity.
double critical_t(const GrowthData& data, CriticalLimits limits = {});

enum class Convergence { InsideRegion, Boundary, OutsideClosure };

std::string to_string(Convergence c);

struct ConvergenceVerdict {
    Convergence verdict = Convergence::Boundary;
    double critical_t = std::numeric_limits<double>::infinity();
    double tolerance = 1e-8;
};

ConvergenceVerdict classify(const GrowthData& data, double tol = 1e-8);

/// Weighted sphere sums sum_{|w| = n} q_w for n = 0..depth, and the last
/// ratio of consecutive sums, compared with the verdict.
struct PartialSumCheck {
    std::vector<double> sphere_weights;
    double last_ratio = 0.0;
    /// The ratio exceeds 1 for OutsideClosure and stays below 1 for
    /// InsideRegion. Boundary cases always agree.
    bool agrees = true;
};

PartialSumCheck partial_sum_check(const GrowthData& data, const ConvergenceVerdict& verdict, std::size_t depth);

}  // namespace gplab
