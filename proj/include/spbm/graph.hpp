#pragma once
// Directed feedback graphs: observability classification, the fractional
// domination LP and its normalized exploration distribution, the
// importance-weighted loss estimator, and the agent's z/u components.

#include <span>
#include <utility>
#include <vector>

#include "spbm/errors.hpp"

namespace spbm {

enum class Observability { non_observable, strong, weak };

struct FeedbackGraph {
    int k = 0;
    std::vector<std::pair<int, int>> edges;  // (i, j): i observes j (0-based)
    std::vector<std::vector<int>> in_nb, out_nb;

    FeedbackGraph() = default;
    FeedbackGraph(int k_, std::vector<std::pair<int, int>> edges_);
};

Observability classify_observability(const FeedbackGraph& g);

struct Domination {
    double delta_star;           // optimal LP value, >= 1 when observable
    std::vector<double> x_star;  // covering weights in [0,1]
    std::vector<double> u_dist;  // x_star / delta_star
};

// Solves min sum x, sum_{i in N_in(j)} x_i >= 1 for all j, 0 <= x <= 1.
// Throws DomainError on non-observable input.
Domination fractional_domination(const FeedbackGraph& g);

// Exhaustive integer domination number; only for k <= 10.
int integer_domination(const FeedbackGraph& g);

// Entry i is loss_i / P_i for observed i (i in N_out(chosen)), 0 elsewhere,
// with P_i = sum_{j in N_in(i)} p_j. Throws DomainError if any P_i is zero.
std::vector<double> graph_loss_estimate(const FeedbackGraph& g, int chosen,
                                        const std::vector<std::pair<int, double>>& observed,
                                        std::span<const double> p);

// z = (4 delta*/(1-alpha)) (sum_{i != leader} q_i^{2-alpha} + gap^{2-alpha}),
// u = (8 delta*/(1-alpha)) gap^{1-alpha}.
std::pair<double, double> graph_zu(std::span<const double> q, double alpha, double delta_star);

} // namespace spbm
