#pragma once
// Experiment orchestration: the FTRL + adaptive-rate loop for all three
// problem families, pseudo-regret accounting against the best fixed action,
// runtime invariant monitors, trace/summary output, scaling fits, and the
// certification entry points surfaced by the CLI.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spbm/env.hpp"
#include "spbm/graph.hpp"
#include "spbm/paid.hpp"
#include "spbm/pm.hpp"

namespace spbm {

struct ExperimentConfig {
    enum class Problem { pm, graph, paid };
    Problem problem = Problem::graph;

    PmGame game;          // pm
    FeedbackGraph graph;  // graph
    int paid_arms = 0;    // paid
    double paid_cost = 0.0;

    EnvSpec env;
    long horizon = 0;
    int replicates = 1;
    std::uint64_t seed = 1;
    std::optional<double> alpha, beta1, beta_bar;
    std::string output_dir;
    bool strict = false;
    int parallel = 1;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Resolved agent parameters (defaults from the problem instance, then
// config overrides). p0 is empty for paid observations (no forced mixing).
struct AgentParams {
    int k = 0;
    double alpha = 0.5, beta1 = 1.0, beta_bar = 0.0;
    std::vector<double> p0;
    double magnitude_const = 1.0;  // c_g (pm) or delta* (graph), 1 for paid
    PmStructure pm;                // populated for pm problems
    Domination dom;                // populated for graph problems
};
AgentParams resolve_params(const ExperimentConfig& cfg);

struct TraceRow {
    long round;
    int action;  // 1-based
    double beta, h, gamma, inst_regret, cum_regret, round_cost;
};

struct RunResult {
    std::vector<TraceRow> rows;
    std::vector<std::pair<long, double>> checkpoints;  // (power-of-two round, cum regret)
    std::vector<std::string> violations;               // invariant monitor failures
    int comparator_action = 0;                         // 0-based
    double final_regret = 0.0;
    double total_cost = 0.0;
};

RunResult run_bobw(const ExperimentConfig& cfg, int replicate);

void write_trace_csv(const std::string& path, const RunResult& run);

struct FitResult {
    double slope, intercept, r_squared;
};

// OLS of log(regret) on log(T). Needs >= 2 positive checkpoints; two points
// interpolate exactly (r^2 = 1).
FitResult scaling_exponent(const std::vector<std::pair<double, double>>& checkpoints);

struct ExperimentSummary {
    std::vector<long> checkpoints;
    std::vector<double> mean_regret;        // aligned with checkpoints
    std::vector<double> final_regret;       // per replicate
    double mean_final_cost = 0.0;
    long violation_count = 0;
    std::optional<FitResult> fit;           // over checkpoints >= 256 when enough points
    int comparator_action = 0;
};

// Runs all replicates (optionally in parallel), writes trace_rep<i>.csv and
// summary.json under cfg.output_dir (if set), and aggregates. In strict mode
// any recorded invariant violation raises ContractError after all replicates
// finish.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

// Randomized certification of the learning-rate bounds; returns the report.
nlohmann::json verify_lemmas(std::uint64_t seed, int instances);

// Mean power-of-two checkpoints across every trace CSV in a directory plus a
// log-log fit (checkpoints >= min_t).
nlohmann::json fit_traces(const std::string& dir, long min_t = 256);

} // namespace spbm
