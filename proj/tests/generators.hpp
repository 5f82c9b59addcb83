#pragma once
// Instance generators shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "spbm/graph.hpp"
#include "spbm/pm.hpp"
#include "spbm/rng.hpp"

namespace gen {

// All-Pareto loss matrices by construction: rows are tangent planes of the
// strictly concave psi(nu) = -||nu||^2 at distinct interior points nu_a, so
// every action uniquely minimizes near its own tangency point (its cell is
// full-dimensional). Entries are affinely rescaled into [0,1], which
// preserves the cell structure.
inline spbm::Matrix tangent_losses(spbm::Rng& rng, int k, int d) {
    std::vector<std::vector<double>> pts;
    while (static_cast<int>(pts.size()) < k) {
        std::vector<double> nu(static_cast<std::size_t>(d));
        double s = 0.0;
        for (auto& v : nu) {
            v = 0.05 + rng.uniform(0.0, 1.0);
            s += v;
        }
        for (auto& v : nu) v /= s;
        bool far = true;
        for (const auto& q : pts) {
            double dist = 0.0;
            for (int x = 0; x < d; ++x) dist += std::abs(nu[static_cast<std::size_t>(x)] - q[static_cast<std::size_t>(x)]);
            far = far && dist > 0.08;
        }
        if (far) pts.push_back(std::move(nu));
    }
    spbm::Matrix loss(k, d);
    for (int a = 0; a < k; ++a) {
        double norm2 = 0.0;
        for (int x = 0; x < d; ++x) norm2 += pts[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] * pts[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)];
        for (int x = 0; x < d; ++x) {
            double v = norm2 - 2.0 * pts[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)];  // in [-2, 1]
            loss(a, x) = (v + 2.0) / 3.0;
        }
    }
    return loss;
}

// Globally observable game: tangent losses plus a feedback matrix whose last
// row reveals the outcome (feedback has no effect on the cell geometry).
inline spbm::PmGame random_observable_game(spbm::Rng& rng, int k, int d) {
    spbm::PmGame g;
    g.loss = tangent_losses(rng, k, d);
    g.feedback.assign(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(d), 0));
    for (int a = 0; a + 1 < k; ++a)
        for (int x = 0; x < d; ++x)
            g.feedback[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] = static_cast<int>(rng.next_u64() % 2);
    for (int x = 0; x < d; ++x) g.feedback[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(x)] = x;
    return g;
}

// d = 2 tangent lines of t -> (t - 1/2)^2 at sorted points tau_a: all Pareto,
// neighbors exactly the consecutive pairs in tau order.
struct LineGame {
    spbm::PmGame game;
    std::vector<int> tau_order;  // action indices sorted by tangency point
};

inline LineGame random_line_game(spbm::Rng& rng, int k) {
    std::vector<double> tau;
    while (static_cast<int>(tau.size()) < k) {
        double t = rng.uniform(0.02, 0.98);
        bool far = true;
        for (double u : tau) far = far && std::abs(t - u) > 0.03;
        if (far) tau.push_back(t);
    }
    LineGame out;
    out.game.loss = spbm::Matrix(k, 2);
    for (int a = 0; a < k; ++a) {
        double t0 = tau[static_cast<std::size_t>(a)];
        // tangent of the concave t -> -(t-1/2)^2, so the min-envelope gives
        // every line its own interval around t0
        auto line = [&](double t) {
            return -(t0 - 0.5) * (t0 - 0.5) - 2.0 * (t0 - 0.5) * (t - t0);
        };
        // values lie in [-0.25, 0.75]; rescale into [0,1]
        out.game.loss(a, 0) = line(1.0) + 0.25;
        out.game.loss(a, 1) = line(0.0) + 0.25;
    }
    out.game.feedback.assign(static_cast<std::size_t>(k), {0, 1});
    out.tau_order.resize(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) out.tau_order[static_cast<std::size_t>(a)] = a;
    std::sort(out.tau_order.begin(), out.tau_order.end(),
              [&](int a, int b) { return tau[static_cast<std::size_t>(a)] < tau[static_cast<std::size_t>(b)]; });
    return out;
}

// Random observable feedback graph: a uniformly chosen dominating vertex set
// covers everyone, plus random extra edges and optional self-loops.
inline spbm::FeedbackGraph random_observable_graph(spbm::Rng& rng, int k) {
    std::vector<std::pair<int, int>> edges;
    int ndom = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::max(1, k / 2)));
    std::vector<int> dom;
    for (int i = 0; i < ndom; ++i) dom.push_back(static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k)));
    for (int j = 0; j < k; ++j)
        edges.emplace_back(dom[static_cast<std::size_t>(rng.next_u64() % dom.size())], j);
    int extra = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(2 * k));
    for (int e = 0; e < extra; ++e)
        edges.emplace_back(static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k)),
                           static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(k)));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return spbm::FeedbackGraph(k, std::move(edges));
}

inline std::vector<double> random_simplex_point(spbm::Rng& rng, int k) {
    std::vector<double> q(static_cast<std::size_t>(k));
    double s = 0.0;
    for (auto& v : q) {
        v = rng.uniform(0.0, 1.0);
        s += v;
    }
    for (auto& v : q) v /= s;
    return q;
}

} // namespace gen
