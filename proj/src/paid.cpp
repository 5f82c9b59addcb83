#include "spbm/paid.hpp"

#include <cmath>

#include "spbm/kernels.hpp"
#include "spbm/prob.hpp"

namespace spbm {

double paid_rate(double z, double u, double beta) {
    if (!(z >= 0.0) || !(u >= 0.0) || !std::isfinite(z) || !std::isfinite(u))
        throw DomainError("z and u must be finite and non-negative");
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    double r = std::sqrt(z / beta) + u / beta;
    if (r > 0.5) throw RTooLarge(r);
    return r;
}

std::vector<int> draw_observation_set(double r, int k, Rng& rng) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("r must lie in [0,1]");
    std::vector<int> set;
    for (int i = 0; i < k; ++i)
        if (rng.bernoulli(r)) set.push_back(i);
    return set;
}

std::vector<double> paid_loss_estimate(double r, const std::vector<int>& set,
                                       const std::vector<double>& losses, int k) {
    std::vector<double> est(static_cast<std::size_t>(k), 0.0);
    if (set.empty()) return est;
    if (!(r > 0.0)) throw DomainError("nonempty observation set with zero rate");
    for (int i : set) {
        if (i < 0 || i >= k) throw DomainError("arm index out of range");
        est[static_cast<std::size_t>(i)] = losses[static_cast<std::size_t>(i)] / r;
    }
    return est;
}

std::pair<double, double> paid_zu(std::span<const double> q, double alpha,
                                  const PaidConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
    auto [lead, gap] = leader_and_gap(q);
    const auto& K = kernels::active();
    double moment = K.pow_sum(q.data(), q.size(), 2.0 - alpha);
    moment -= std::pow(q[static_cast<std::size_t>(lead)], 2.0 - alpha);
    moment += gap > 0.0 ? std::pow(gap, 2.0 - alpha) : 0.0;
    double z = 4.0 * cfg.cost * cfg.arms / (1.0 - alpha) * moment;
    double u = gap > 0.0
                   ? 8.0 * std::max(cfg.cost, 1.0) / (1.0 - alpha) * std::pow(gap, 1.0 - alpha)
                   : 0.0;
    return {z, u};
}

double paid_round_cost(const std::vector<int>& set, double cost) {
    return static_cast<double>(set.size()) * cost;
}

} // namespace spbm
