#pragma once
// Multi-armed bandits with paid observations: Bernoulli observation sets,
// the importance-weighted estimator, cost accounting and the z/u components.

#include <span>
#include <utility>
#include <vector>

#include "spbm/errors.hpp"
#include "spbm/rng.hpp"

namespace spbm {

struct PaidConfig {
    int arms = 0;
    double cost = 0.0;  // uniform per-arm observation cost c >= 0
    double alpha;
    double beta1;
    double beta_bar;

    // beta1 >= 64 max{c,1} k / (1-alpha) by default; construction only checks
    // the hard invariants, the harness fills defaults
    void validate() const {
        if (arms < 2) throw DomainError("need at least 2 arms");
        if (!(cost >= 0.0)) throw DomainError("cost must be non-negative");
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
        if (!(beta1 > 0.0)) throw DomainError("beta1 must be positive");
        if (!(beta_bar >= 0.0)) throw DomainError("beta_bar must be non-negative");
    }
};

// r = sqrt(z/beta) + u/beta; throws RTooLarge beyond 1/2.
double paid_rate(double z, double u, double beta);

// Independent Bernoulli(r) membership per arm.
std::vector<int> draw_observation_set(double r, int k, Rng& rng);

// Entry i is loss_i / r for i in the set, 0 elsewhere; r = 0 requires an
// empty set and yields the zero vector.
std::vector<double> paid_loss_estimate(double r, const std::vector<int>& set,
                                       const std::vector<double>& losses, int k);

// z = (4 c k/(1-alpha)) (sum_{i != leader} q_i^{2-alpha} + gap^{2-alpha}),
// u = (8 max{c,1}/(1-alpha)) gap^{1-alpha}.
std::pair<double, double> paid_zu(std::span<const double> q, double alpha,
                                  const PaidConfig& cfg);

double paid_round_cost(const std::vector<int>& set, double cost);

} // namespace spbm
