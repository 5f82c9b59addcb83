// Command-line front end: experiment runner, instance analyzers, the
// learning-rate certification, and trace fitting.
//
// Exit codes: 0 success, 2 configuration/input error, 3 contract or
// invariant failure (strict runs).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spbm/harness.hpp"
#include "spbm/kernels.hpp"

using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::ofstream out(out_path);
        if (!out) throw spbm::ConfigError("cannot write " + out_path);
        out << j.dump(2) << '\n';
    }
}

int cmd_run(const std::string& config_path, bool strict, int parallel) {
    spbm::ExperimentConfig cfg = spbm::load_config_file(config_path);
    cfg.strict = strict;
    cfg.parallel = parallel;
    spbm::ExperimentSummary sum = spbm::run_experiment(cfg);
    json j;
    j["replicates"] = cfg.replicates;
    j["violations"] = sum.violation_count;
    if (!sum.final_regret.empty()) {
        double mean = 0.0;
        for (double r : sum.final_regret) mean += r / static_cast<double>(sum.final_regret.size());
        j["mean_final_regret"] = mean;
    }
    j["mean_final_cost"] = sum.mean_final_cost;
    if (sum.fit)
        j["fit"] = {{"slope", sum.fit->slope}, {"r_squared", sum.fit->r_squared}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_analyze(const std::string& game_path, const std::string& out_path) {
    std::ifstream in(game_path);
    if (!in) throw spbm::ConfigError("cannot open " + game_path);
    json gj = json::parse(in);
    spbm::PmGame game;
    {
        auto loss = gj.at("loss").get<std::vector<std::vector<double>>>();
        if (loss.empty() || loss.front().empty()) throw spbm::ConfigError("empty loss matrix");
        game.loss = spbm::Matrix(static_cast<int>(loss.size()), static_cast<int>(loss.front().size()));
        for (int a = 0; a < game.loss.rows; ++a)
            for (int x = 0; x < game.loss.cols; ++x) game.loss(a, x) = loss[a][x];
        game.feedback = gj.at("feedback").get<std::vector<std::vector<int>>>();
    }

    json rep;
    try {
        spbm::PmStructure s = spbm::analyze_game(game);
        rep["pareto"] = std::vector<bool>(s.pareto.begin(), s.pareto.end());
        json edges = json::array();
        for (auto [a, b] : s.edges) edges.push_back({a + 1, b + 1});
        rep["edges"] = edges;
        rep["global_observability"] = true;
        rep["c_g"] = s.c_g;
        rep["per_edge_residual"] = s.edge_residual;
        json tree = json::array();
        for (int p : s.parent) tree.push_back(p + 1);  // 0 marks the root
        rep["in_tree_parent"] = tree;
    } catch (const spbm::NotGloballyObservable& e) {
        rep["global_observability"] = false;
        rep["error"] = e.what();
        emit(rep, out_path);
        return 0;  // a valid analysis outcome
    }
    emit(rep, out_path);
    return 0;
}

int cmd_analyze_graph(const std::string& graph_path, const std::string& out_path) {
    std::ifstream in(graph_path);
    if (!in) throw spbm::ConfigError("cannot open " + graph_path);
    json gj = json::parse(in);
    int k = gj.at("k").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : gj.at("edges")) edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    spbm::FeedbackGraph g(k, std::move(edges));

    json rep;
    spbm::Observability cls = spbm::classify_observability(g);
    rep["class"] = cls == spbm::Observability::non_observable ? "non-observable"
                   : cls == spbm::Observability::strong       ? "strong"
                                                              : "weak";
    if (cls != spbm::Observability::non_observable) {
        spbm::Domination dom = spbm::fractional_domination(g);
        rep["delta_star"] = dom.delta_star;
        rep["x_star"] = dom.x_star;
        rep["u_dist"] = dom.u_dist;
        if (k <= 10) rep["integer_domination"] = spbm::integer_domination(g);
    }
    emit(rep, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"FTRL with stability-penalty-bias matched learning rates: "
                 "partial monitoring, graph bandits, paid observations"};
    app.require_subcommand(1);

    std::string config_path, game_path, graph_path, traces_dir, out_path;
    bool strict = false;
    int parallel = 1;
    int instances = 100;
    std::uint64_t seed = 1;
    long min_t = 256;
    std::string kernels;
    app.add_option("--kernels", kernels, "force kernel variant: scalar|avx2|auto");

    auto* run = app.add_subcommand("run", "run a configured experiment");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_flag("--strict", strict, "treat invariant violations as fatal");
    run->add_option("--parallel", parallel, "worker threads for replicates");

    auto* analyze = app.add_subcommand("analyze", "analyze a partial-monitoring game");
    analyze->add_option("game", game_path, "game JSON ({loss, feedback})")->required();
    analyze->add_option("--out", out_path, "write the report here instead of stdout");

    auto* agraph = app.add_subcommand("analyze-graph", "analyze a feedback graph");
    agraph->add_option("graph", graph_path, "graph JSON ({k, edges})")->required();
    agraph->add_option("--out", out_path, "write the report here instead of stdout");

    auto* verify = app.add_subcommand("verify-lemmas", "certify the learning-rate bounds");
    verify->add_option("--instances", instances, "random instances per check");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--out", out_path, "write the report here instead of stdout");

    auto* fit = app.add_subcommand("fit", "fit a scaling exponent to trace checkpoints");
    fit->add_option("--traces", traces_dir, "directory of trace CSVs")->required();
    fit->add_option("--out", out_path, "output JSON path")->required();
    fit->add_option("--min-t", min_t, "smallest checkpoint to include");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!kernels.empty() && !spbm::kernels::select(kernels.c_str()))
            throw spbm::ConfigError("kernel variant unavailable: " + kernels);
        if (run->parsed()) return cmd_run(config_path, strict, parallel);
        if (analyze->parsed()) return cmd_analyze(game_path, out_path);
        if (agraph->parsed()) return cmd_analyze_graph(graph_path, out_path);
        if (verify->parsed()) {
            emit(spbm::verify_lemmas(seed, instances), out_path);
            return 0;
        }
        if (fit->parsed()) {
            emit(spbm::fit_traces(traces_dir, min_t), out_path);
            return 0;
        }
    } catch (const spbm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const spbm::ContractError& e) {
        std::cerr << "contract failure: " << e.what() << '\n';
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const spbm::DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
