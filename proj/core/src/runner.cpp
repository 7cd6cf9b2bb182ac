#include "gplab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "gplab/boundary.hpp"
#include "gplab/config.hpp"
#include "gplab/fock.hpp"

#ifndef GPLAB_VERSION
#define GPLAB_VERSION "unknown"
#endif

namespace gplab {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::vector<std::string> command_names = {
    "check-identities", "growth", "simplicity", "trace", "nuclearity", "witness-topofree", "tensor-split", "report-all",
};

/// JSON has no infinities; write them as strings rather than null.
json real(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json verdict_json(const Verdict& v, const json& seeds) {
    json evidence = json::array();
    for (const auto& e : v.evidence)
        evidence.push_back(
            {{"name", e.name}, {"value", real(e.value)}, {"tolerance", real(e.tolerance)}, {"passed", e.passed}});
    json parts = json::array();
    for (const auto& p : v.parts) parts.push_back(verdict_json(p, seeds));
    return {{"statement", v.statement}, {"result", to_string(v.result)}, {"summary", v.summary},
            {"evidence", std::move(evidence)}, {"citations", v.citations}, {"seeds", seeds},
            {"parts", std::move(parts)}};
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class Session {
public:
    Session(const ProblemConfig& config, bool strict) : config_(config), strict_(strict) {}

    void run(const std::string& command) {
        const std::vector<std::pair<std::string, std::function<json()>>> sections = {
            {"check-identities", [this] { return identities(); }},
            {"growth", [this] { return growth(); }},
            {"simplicity", [this] { return simplicity(); }},
            {"trace", [this] { return trace(); }},
            {"nuclearity", [this] { return nuclearity(); }},
            {"witness-topofree", [this] { return topofree(); }},
            {"tensor-split", [this] { return tensor_split(); }},
        };
        for (const auto& [name, body] : sections) {
            if (command != "report-all" && command != name) continue;
            const auto start = Clock::now();
            try {
                results_[name] = body();
            } catch (const ResourceError& e) {
                capped_ = true;
                results_[name] = {{"error", "resource_cap"}, {"message", e.what()}};
                messages_.push_back(name + ": " + e.what());
            } catch (const DomainError& e) {
                invalid_ = true;
                results_[name] = {{"error", "invalid_input"}, {"message", e.what()}};
                messages_.push_back(name + ": " + e.what());
            }
            const double elapsed = seconds_since(start);
            timing_["sections"][name] = elapsed;
            if (elapsed > config_.caps.check_seconds) over_limit_.push_back(name);
        }
    }

    ExitCode exit() const {
        if (invalid_) return ExitCode::ConfigError;
        if (failed_) return ExitCode::CheckFailed;
        if (capped_) return ExitCode::ResourceCap;
        if (strict_ && inconclusive_) return ExitCode::CheckFailed;
        return ExitCode::Pass;
    }

    json results() const { return results_; }
    std::string csv() const { return csv_; }
    std::string message() const {
        std::string out;
        for (const auto& m : messages_) out += (out.empty() ? "" : "; ") + m;
        return out;
    }

    json timing(double total) const {
        json t = timing_;
        t["total_seconds"] = total;
        t["soft_limit_seconds"] = config_.caps.check_seconds;
        t["over_soft_limit"] = over_limit_;
        return t;
    }

private:
    BallLimits ball_limits(std::size_t depth) const {
        return BallLimits{std::max<std::size_t>(depth, BallLimits{}.max_depth), config_.caps.ball_size};
    }

    void note_verdict(const Verdict& v) {
        if (v.result == Outcome::Inconclusive) inconclusive_ = true;
    }

    json identities() {
        if (config_.suite.max_expression_length > config_.caps.expression_length)
            throw ResourceError("expression length " + std::to_string(config_.suite.max_expression_length) +
                                " exceeds cap " + std::to_string(config_.caps.expression_length));
        SuiteOptions options;
        options.depth = config_.depth;
        options.seed = config_.seeds.identities;
        options.draws = config_.suite.draws;
        options.expressions = config_.suite.expressions;
        options.max_expression_length = config_.suite.max_expression_length;
        options.tolerance = config_.tolerances.identities;
        options.caps.max_dimension = config_.caps.fock_dimension;
        options.caps.ball = ball_limits(config_.depth);
        options.fault = config_.fault;

        const auto report = identity_suite(config_.problem, options);
        json checks = json::array();
        for (const auto& c : report.checks) {
            json record{{"name", c.name}, {"max_deviation", real(c.max_deviation)}, {"tolerance", c.tolerance},
                        {"passed", c.passed}, {"skipped", c.skipped}, {"seed", c.seed}};
            if (c.skipped) record["reason"] = c.reason;
            checks.push_back(std::move(record));
            timing_["checks"][c.name] = c.seconds;
            if (c.seconds > config_.caps.check_seconds) over_limit_.push_back(c.name);
            if (c.capped) {
                capped_ = true;
                messages_.push_back(c.name + ": " + c.reason);
            }
        }
        if (!report.all_passed()) failed_ = true;
        return {{"depth", config_.depth}, {"checks", std::move(checks)}, {"all_passed", report.all_passed()}};
    }

    json growth() {
        const auto& g = config_.problem.graph;
        const std::size_t depth = config_.growth.depth;
        const auto taylor = growth_taylor(g, depth);
        const auto spheres = sphere_counts(g, depth, ball_limits(depth));
        const bool agree = taylor == spheres;
        if (!agree) failed_ = true;

        csv_ = "length,taylor,sphere_count\n";
        for (std::size_t n = 0; n <= depth; ++n)
            csv_ += std::to_string(n) + "," + std::to_string(taylor[n]) + "," + std::to_string(spheres[n]) + "\n";

        std::vector<double> q(g.size());
        json q_json = json::object();
        for (std::size_t i = 0; i < g.size(); ++i) {
            std::string source = "config";
            if (config_.growth.q) {
                q[i] = (*config_.growth.q)[i];
            } else {
                const auto param = vertex_parameter(config_.problem.vertices[i]);
                q[i] = param.q;
                source = param.source;
            }
            q_json[g.names()[i]] = {{"q", q[i]}, {"source", source}};
        }
        json out{{"depth", depth},
                 {"clique_polynomial", clique_polynomial(g)},
                 {"taylor", taylor},
                 {"sphere_counts", spheres},
                 {"coefficients_agree", agree},
                 {"q", std::move(q_json)}};
        if (std::any_of(q.begin(), q.end(), [](double x) { return !(x > 0.0); })) {
            out["classification"] = {{"verdict", nullptr}, {"reason", "some q_v is not positive"}};
            return out;
        }
        const GrowthData data(g, q);
        const auto verdict = classify(data, config_.tolerances.growth);
        out["classification"] = {{"verdict", to_string(verdict.verdict)},
                                 {"critical_t", real(verdict.critical_t)},
                                 {"tolerance", verdict.tolerance}};
        const auto partial = partial_sum_check(data, verdict, depth);
        out["partial_sums"] = {{"sphere_weights", partial.sphere_weights},
                               {"last_ratio", real(partial.last_ratio)},
                               {"agrees", partial.agrees}};
        return out;
    }

    json simplicity() {
        const auto v = simplicity_report(config_.problem,
                                         SimplicityOptions{config_.tolerances.growth, config_.tolerances.witness});
        note_verdict(v);
        return verdict_json(v, json::object());
    }

    json trace() {
        TraceOptions options;
        options.seed = config_.seeds.probe;
        options.tracial_tolerance = config_.tolerances.tracial;
        options.violation_threshold = config_.tolerances.violation;
        const auto v = trace_report(config_.problem, options);
        note_verdict(v);
        return verdict_json(v, {{"probe", options.seed}});
    }

    json nuclearity() {
        const auto v = nuclearity_exactness_report(config_.problem);
        note_verdict(v);
        return verdict_json(v, json::object());
    }

    json topofree() {
        const CoxeterGroup grp(config_.problem.graph);
        const auto w = grp.parse(config_.topofree.w);
        std::vector<NormalForm> s;
        json s_json = json::array();
        if (config_.topofree.s) {
            for (const auto& word : *config_.topofree.s) s.push_back(grp.parse(word));
        } else {
            for (VertexId v : config_.problem.graph.vertices()) s.push_back(grp.generator(v));
        }
        for (const auto& x : s) s_json.push_back(grp.format(x));
        json out{{"w", grp.format(w)}, {"S", std::move(s_json)}};

        TopofreeWitness found;
        try {
            found = topofree_witness(grp, w, s, WitnessLimits{config_.topofree.search_radius, config_.topofree.max_power});
        } catch (const DomainError& e) {
            out["result"] = to_string(Outcome::HypothesesFail);
            out["summary"] = e.what();
            return out;
        }
        out["candidates_tried"] = found.candidates_tried;
        if (!found.found) {
            inconclusive_ = true;
            out["result"] = to_string(Outcome::Inconclusive);
            out["summary"] = "no witness within the search radius";
            return out;
        }
        json walk = json::array();
        for (VertexId v : found.walk.steps) walk.push_back(config_.problem.graph.name(v));
        json checks = json::array();
        for (const auto& c : found.checks)
            checks.push_back({{"power", c.power}, {"length_additive", c.length_additive}, {"not_prefix", c.not_prefix}});
        out["result"] = to_string(Outcome::Established);
        out["v"] = grp.format(found.v);
        out["walk"] = std::move(walk);
        out["checks"] = std::move(checks);
        return out;
    }

    json tensor_split() {
        const auto& g = config_.problem.graph;
        const auto factors = join_factor_masks(g);
        if (factors.size() < 2) return {{"result", "NotApplicable"}, {"summary", "the graph is not a join"}};
        const auto report = tensor_split_check(g, factors.front(), config_.problem.reps(), config_.depth);
        const double tol = config_.tolerances.tensor_split;
        const bool passed = report.max_deviation <= tol;
        if (!passed) failed_ = true;
        json first = json::array();
        for (VertexId v : members(factors.front())) first.push_back(g.name(v));
        return {{"first_factor", std::move(first)},
                {"max_deviation", real(report.max_deviation)},
                {"tolerance", tol},
                {"generators_checked", report.generators_checked},
                {"dimension", report.dimension},
                {"passed", passed}};
    }

    const ProblemConfig& config_;
    bool strict_;
    json results_ = json::object();
    json timing_ = {{"sections", json::object()}, {"checks", json::object()}};
    std::vector<std::string> over_limit_;
    std::vector<std::string> messages_;
    std::string csv_;
    bool failed_ = false;
    bool capped_ = false;
    bool invalid_ = false;
    bool inconclusive_ = false;
};

std::string status_of(ExitCode code) {
    switch (code) {
        case ExitCode::Pass: return "pass";
        case ExitCode::CheckFailed: return "check_failed";
        case ExitCode::ConfigError: return "config_error";
        case ExitCode::ResourceCap: return "resource_cap";
    }
    return "unknown";
}

RunOutcome config_failure(std::string_view command, const std::string& message, std::size_t line,
                          std::size_t column) {
    json error{{"message", message}};
    if (line > 0) {
        error["line"] = line;
        error["column"] = column;
    }
    json report{{"command", command},
                {"exit_code", static_cast<int>(ExitCode::ConfigError)},
                {"status", status_of(ExitCode::ConfigError)},
                {"error", std::move(error)}};
    return RunOutcome{ExitCode::ConfigError, report.dump(2) + "\n", "", message};
}

json versions() {
    return {{"gplab", GPLAB_VERSION},
            {"config_schema", config_schema_version},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

const std::vector<std::string>& runner_commands() { return command_names; }

RunOutcome run_command(std::string_view command, std::string_view config_text, const RunOverrides& overrides) {
    const auto start = Clock::now();
    if (std::find(command_names.begin(), command_names.end(), command) == command_names.end())
        return config_failure(command, "unknown command '" + std::string(command) + "'", 0, 0);

    ProblemConfig config;
    try {
        config = parse_config(config_text);
    } catch (const ConfigError& e) {
        return config_failure(command, e.what(), e.line(), e.column());
    }
    if (overrides.seed) config.seeds.identities = config.seeds.probe = *overrides.seed;
    if (overrides.depth) config.depth = *overrides.depth;
    if (overrides.tolerance) {
        if (!(*overrides.tolerance > 0.0)) return config_failure(command, "--tolerance must be positive", 0, 0);
        config.tolerances.identities = config.tolerances.tensor_split = *overrides.tolerance;
    }

    Session session(config, overrides.strict);
    session.run(std::string(command));
    const ExitCode exit = session.exit();

    const std::string echo = echo_config(config);
    json report{{"command", command},
                {"config", json::parse(echo)},
                {"config_hash", content_hash(echo)},
                {"strict", overrides.strict},
                {"results", session.results()},
                {"exit_code", static_cast<int>(exit)},
                {"status", status_of(exit)},
                {"versions", versions()},
                {"timing", session.timing(seconds_since(start))}};

    RunOutcome out;
    out.exit = exit;
    out.report = report.dump(2) + "\n";
    if (command == "growth" || command == "report-all") out.csv = session.csv();
    out.message = session.message();
    return out;
}

}  // namespace gplab
