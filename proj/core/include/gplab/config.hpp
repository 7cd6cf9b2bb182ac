#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gplab/identity_suite.hpp"
#include "gplab/structure.hpp"

namespace gplab {

inline constexpr int config_schema_version = 1;

/// Malformed or invalid problem config. Line and column are 1-based and 0 when
/// no location could be attached.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, std::size_t line, std::size_t column);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct RunCaps {
    std::size_t fock_dimension = 20000;
    std::size_t ball_size = 1'000'000;
    std::size_t expression_length = 12;
    /// Soft limit; checks running longer are flagged in the timing block.
    double check_seconds = 60.0;
};

struct RunTolerances {
    double identities = 1e-9;
    double tensor_split = 1e-12;
    double growth = 1e-8;
    double witness = 1e-10;
    double tracial = 1e-10;
    double violation = 1e-3;
};

struct RunSeeds {
    std::uint64_t identities = 1;
    std::uint64_t probe = 1;
};

struct SuiteSizes {
    std::size_t draws = 10;
    std::size_t expressions = 20;
    std::size_t max_expression_length = 6;
};

struct GrowthSettings {
    std::size_t depth = 8;
    /// Per-vertex parameters; when absent they come from the vertex witnesses.
    std::optional<std::vector<double>> q;
};

struct TopofreeSettings {
    std::vector<std::string> w;
    /// Words of S; when absent S is the generating set.
    std::optional<std::vector<std::vector<std::string>>> s;
    std::size_t search_radius = 4;
    std::size_t max_power = 4;
};

struct ProblemConfig {
    GraphProductProblem problem;
    /// Fock space truncation N.
    std::size_t depth = 4;
    RunSeeds seeds;
    RunCaps caps;
    RunTolerances tolerances;
    SuiteSizes suite;
    GrowthSettings growth;
    TopofreeSettings topofree;
    SuiteFault fault = SuiteFault::None;
};

/// Parses and validates a JSON problem config. Throws ConfigError with the
/// offending line on syntax errors, unknown keys and invalid values.
ProblemConfig parse_config(std::string_view text);

/// Canonical JSON for the config with every default written out; parsing it
/// gives back an equivalent config.
std::string echo_config(const ProblemConfig& config);

/// FNV-1a 64 of the text, as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace gplab
