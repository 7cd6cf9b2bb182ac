#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gplab {

enum class ExitCode : int { Pass = 0, CheckFailed = 1, ConfigError = 2, ResourceCap = 3 };

/// Command line values that replace the corresponding config entries before
/// the config is echoed, so the report stays re-runnable from its echo.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> depth;
    std::optional<double> tolerance;
    /// Inconclusive verdicts exit with CheckFailed.
    bool strict = false;
};

struct RunOutcome {
    ExitCode exit = ExitCode::Pass;
    /// JSON report; for config errors it carries only the error.
    std::string report;
    /// Growth coefficients as CSV, for the growth and report-all commands.
    std::string csv;
    /// One-line diagnostic for config errors and caps.
    std::string message;
};

const std::vector<std::string>& runner_commands();

/// Runs one command on a JSON config. Never throws for bad input: config
/// problems, unknown commands and caps map to their exit codes.
RunOutcome run_command(std::string_view command, std::string_view config_text, const RunOverrides& overrides = {});

}  // namespace gplab
