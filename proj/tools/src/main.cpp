#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gplab/runner.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph product operator algebra laboratory"};
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string csv_path;
    gplab::RunOverrides overrides;

    app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(gplab::runner_commands()));
    app.add_option("--config", config_path, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", overrides.seed, "Seed for every randomized check");
    app.add_option("--depth", overrides.depth, "Fock space truncation N");
    app.add_option("--tolerance", overrides.tolerance, "Tolerance for the identity and tensor split checks");
    app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
    app.add_option("--csv", csv_path, "Write growth coefficients as CSV");
    app.add_flag("--strict", overrides.strict, "Exit nonzero on Inconclusive verdicts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(gplab::ExitCode::ConfigError);
    }

    std::ifstream in(config_path, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    if (!in) {
        std::cerr << "cannot read " << config_path << "\n";
        return static_cast<int>(gplab::ExitCode::ConfigError);
    }

    const auto outcome = gplab::run_command(command, text.str(), overrides);
    if (!outcome.message.empty()) std::cerr << config_path << ": " << outcome.message << "\n";

    if (out_path.empty()) {
        std::cout << outcome.report;
    } else if (!write_file(out_path, outcome.report)) {
        std::cerr << "cannot write " << out_path << "\n";
        return static_cast<int>(gplab::ExitCode::ConfigError);
    }
    if (!csv_path.empty() && !outcome.csv.empty() && !write_file(csv_path, outcome.csv)) {
        std::cerr << "cannot write " << csv_path << "\n";
        return static_cast<int>(gplab::ExitCode::ConfigError);
    }
    return static_cast<int>(outcome.exit);
}
