#pragma once
// Partial monitoring game analysis: Pareto cells, the neighbor relation,
// per-edge estimation functions, the path-summed estimator table and its
// magnitude constant, plus the stability/bias components for the agent.

#include <utility>
#include <vector>

#include "spbm/linalg.hpp"
#include "spbm/prob.hpp"

namespace spbm {

struct PmGame {
    Matrix loss;                             // k x d, entries in [0,1]
    std::vector<std::vector<int>> feedback;  // k x d symbol ids, >= 0

    int k() const { return loss.rows; }
    int d() const { return loss.cols; }
    int num_symbols() const;  // 1 + max symbol id
    void validate() const;    // shape, ranges, duplicate rows
};

struct PmStructure {
    std::vector<char> pareto;                 // all true on success
    std::vector<std::pair<int, int>> edges;   // neighbor pairs, a < b (0-based)
    // w[e][(c, sigma)] solves sum_c w(c, Phi_{cx}) = L_{ax} - L_{bx} per outcome
    std::vector<std::vector<double>> w;       // indexed c * S + sigma
    std::vector<double> edge_residual;        // ||A w - rhs||_inf per edge
    std::vector<int> parent;                  // in-tree toward root 0, parent[0] = -1
    std::vector<double> g;                    // G[(a*S + sigma)*k + b]
    double c_g = 1.0;                         // max{1, k ||G||_inf}

    double G(int a, int sigma, int b, int k, int S) const {
        return g[(static_cast<std::size_t>(a) * S + sigma) * k + b];
    }
};

// Decides dim(cell_a) = d-1 for every action via a margin LP. Throws
// NonParetoAction / DuplicateAction.
std::vector<char> validate_game(const PmGame& game);

// Pairs with dim(cell_a intersect cell_b) = d-2; the resulting graph must be
// connected (DisconnectedNeighborGraph otherwise).
std::vector<std::pair<int, int>> neighbor_graph(const PmGame& game,
                                                const std::vector<char>& pareto);

// Minimum-norm per-edge solutions of the observability system; throws
// NotGloballyObservable on the first infeasible edge.
std::vector<std::vector<double>> estimation_functions(
    const PmGame& game, const std::vector<std::pair<int, int>>& edges,
    std::vector<double>* residuals = nullptr);

// BFS in-tree rooted at action 0, path sums, magnitude constant.
void build_estimator(const PmGame& game, const std::vector<std::pair<int, int>>& edges,
                     const std::vector<std::vector<double>>& w, PmStructure& out);

// Full pipeline.
PmStructure analyze_game(const PmGame& game);

// y_hat = G(chosen, symbol) / p[chosen]; requires p[chosen] > 0.
std::vector<double> pm_loss_estimate(const PmStructure& s, int k, int chosen, int symbol,
                                     std::span<const double> p);

// Stability and bias components: with (leader, gap) of q,
//   z = (4 c_g^2 / (1-alpha)) (sum_{i != leader} q_i^{2-alpha} + gap^{2-alpha})
//   u = (8 c_g   / (1-alpha)) gap^{1-alpha}
std::pair<double, double> pm_zu(std::span<const double> q, double alpha, double c_g);

} // namespace spbm
