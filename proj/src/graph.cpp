#include "spbm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spbm/kernels.hpp"
#include "spbm/lp.hpp"
#include "spbm/prob.hpp"

namespace spbm {

FeedbackGraph::FeedbackGraph(int k_, std::vector<std::pair<int, int>> edges_)
    : k(k_), edges(std::move(edges_)) {
    if (k < 2) throw DomainError("need at least 2 vertices");
    in_nb.resize(static_cast<std::size_t>(k));
    out_nb.resize(static_cast<std::size_t>(k));
    for (auto [i, j] : edges) {
        if (i < 0 || i >= k || j < 0 || j >= k) throw DomainError("edge endpoint out of range");
        out_nb[static_cast<std::size_t>(i)].push_back(j);
        in_nb[static_cast<std::size_t>(j)].push_back(i);
    }
    for (auto& v : in_nb) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : out_nb) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
}

Observability classify_observability(const FeedbackGraph& g) {
    for (const auto& nb : g.in_nb)
        if (nb.empty()) return Observability::non_observable;
    for (int i = 0; i < g.k; ++i) {
        const auto& nb = g.in_nb[static_cast<std::size_t>(i)];
        bool self = std::binary_search(nb.begin(), nb.end(), i);
        bool all_others = true;
        for (int j = 0; j < g.k && all_others; ++j)
            if (j != i && !std::binary_search(nb.begin(), nb.end(), j)) all_others = false;
        if (!self && !all_others) return Observability::weak;
    }
    return Observability::strong;
}

Domination fractional_domination(const FeedbackGraph& g) {
    if (classify_observability(g) == Observability::non_observable)
        throw DomainError("graph is not observable");

    std::vector<double> obj(static_cast<std::size_t>(g.k), 1.0);
    std::vector<LpConstraint> cons;
    for (int j = 0; j < g.k; ++j) {
        std::vector<double> row(static_cast<std::size_t>(g.k), 0.0);
        for (int i : g.in_nb[static_cast<std::size_t>(j)]) row[static_cast<std::size_t>(i)] = 1.0;
        cons.push_back({std::move(row), 1.0, Sense::ge});
    }
    LpBounds bounds;
    bounds.lo.assign(static_cast<std::size_t>(g.k), 0.0);
    bounds.hi.assign(static_cast<std::size_t>(g.k), 1.0);

    LpSolution sol;
    try {
        sol = lp_solve(obj, cons, bounds);
    } catch (const Infeasible&) {
        throw DomainError("domination LP infeasible");
    }

    Domination dom;
    dom.delta_star = sol.value;
    dom.x_star = sol.x;
    dom.u_dist.resize(sol.x.size());
    for (std::size_t i = 0; i < sol.x.size(); ++i) dom.u_dist[i] = sol.x[i] / sol.value;
    return dom;
}

int integer_domination(const FeedbackGraph& g) {
    if (g.k > 10) throw DomainError("exhaustive search is limited to k <= 10");
    std::vector<unsigned> cover(static_cast<std::size_t>(g.k), 0);
    for (int j = 0; j < g.k; ++j)
        for (int i : g.in_nb[static_cast<std::size_t>(j)])
            cover[static_cast<std::size_t>(j)] |= 1u << i;
    int best = g.k + 1;
    for (unsigned mask = 0; mask < (1u << g.k); ++mask) {
        bool ok = true;
        for (int j = 0; j < g.k && ok; ++j)
            if ((cover[static_cast<std::size_t>(j)] & mask) == 0) ok = false;
        if (ok) best = std::min(best, __builtin_popcount(mask));
    }
    if (best > g.k) throw DomainError("graph is not observable");
    return best;
}

std::vector<double> graph_loss_estimate(const FeedbackGraph& g, int chosen,
                                        const std::vector<std::pair<int, double>>& observed,
                                        std::span<const double> p) {
    if (chosen < 0 || chosen >= g.k) throw DomainError("chosen action out of range");
    if (static_cast<int>(p.size()) != g.k) throw DomainError("p dimension mismatch");
    std::vector<double> P(static_cast<std::size_t>(g.k), 0.0);
    for (int i = 0; i < g.k; ++i) {
        for (int j : g.in_nb[static_cast<std::size_t>(i)]) P[static_cast<std::size_t>(i)] += p[static_cast<std::size_t>(j)];
        if (!(P[static_cast<std::size_t>(i)] > 0.0))
            throw DomainError("observation probability P_i is zero (mixing contract violated)");
    }
    std::vector<double> est(static_cast<std::size_t>(g.k), 0.0);
    const auto& out = g.out_nb[static_cast<std::size_t>(chosen)];
    for (auto [j, lossj] : observed) {
        if (!std::binary_search(out.begin(), out.end(), j))
            throw DomainError("observed vertex is not an out-neighbor of the chosen action");
        est[static_cast<std::size_t>(j)] = lossj / P[static_cast<std::size_t>(j)];
    }
    return est;
}

std::pair<double, double> graph_zu(std::span<const double> q, double alpha, double delta_star) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
    if (!(delta_star >= 1.0)) throw DomainError("delta_star must be >= 1");
    auto [lead, gap] = leader_and_gap(q);
    const auto& K = kernels::active();
    double moment = K.pow_sum(q.data(), q.size(), 2.0 - alpha);
    moment -= std::pow(q[static_cast<std::size_t>(lead)], 2.0 - alpha);
    moment += gap > 0.0 ? std::pow(gap, 2.0 - alpha) : 0.0;
    double z = 4.0 * delta_star / (1.0 - alpha) * moment;
    double u = gap > 0.0 ? 8.0 * delta_star / (1.0 - alpha) * std::pow(gap, 1.0 - alpha) : 0.0;
    return {z, u};
}

} // namespace spbm
