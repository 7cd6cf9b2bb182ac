#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gplab/fock.hpp"
#include "gplab/structure.hpp"

namespace gplab {

enum class SuiteFault { None, RewriteContraction };

struct SuiteOptions {
    std::size_t depth = 4;
    std::uint64_t seed = 1;
    std::size_t draws = 10;
    std::size_t expressions = 20;
    std::size_t max_expression_length = 6;
    double tolerance = 1e-9;
    FockLimits caps{};
    /// Corrupts one rewrite rule so a harness self-test can see the suite fail.
    SuiteFault fault = SuiteFault::None;
};

struct CheckRecord {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    bool skipped = false;
    /// Skipped because a resource cap would have been exceeded.
    bool capped = false;
    std::string reason;
    std::uint64_t seed = 0;
    double seconds = 0.0;
};

struct SuiteReport {
    std::vector<CheckRecord> checks;

    /// No check failed; skipped checks do not count as failures.
    bool all_passed() const;
};

/// Runs every registered operator identity on the problem's Fock space. A
/// check that would exceed a cap is recorded as skipped with the reason.
SuiteReport identity_suite(const GraphProductProblem& p, const SuiteOptions& options = {});

}  // namespace gplab
