#include "spbm/pm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "spbm/kernels.hpp"
#include "spbm/lp.hpp"
#include "spbm/prob.hpp"

namespace spbm {
namespace {

constexpr double kMarginTol = 1e-9;

// max s over { nu in simplex, nu_x >= s, extra rows . nu + s <= 0 [or = 0] };
// returns -1 when even s = 0 is infeasible.
double margin_lp(int d, const std::vector<std::vector<double>>& le_rows,
                 const std::vector<double>* eq_row) {
    const int n = d + 1;  // nu_1..nu_d, s
    std::vector<double> obj(static_cast<std::size_t>(n), 0.0);
    obj[static_cast<std::size_t>(d)] = -1.0;  // maximize s

    std::vector<LpConstraint> cons;
    {
        std::vector<double> r(static_cast<std::size_t>(n), 1.0);
        r[static_cast<std::size_t>(d)] = 0.0;
        cons.push_back({r, 1.0, Sense::eq});
    }
    for (const auto& row : le_rows) {
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        for (int x = 0; x < d; ++x) r[static_cast<std::size_t>(x)] = row[static_cast<std::size_t>(x)];
        r[static_cast<std::size_t>(d)] = 1.0;
        cons.push_back({std::move(r), 0.0, Sense::le});
    }
    if (eq_row) {
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        for (int x = 0; x < d; ++x) r[static_cast<std::size_t>(x)] = (*eq_row)[static_cast<std::size_t>(x)];
        cons.push_back({std::move(r), 0.0, Sense::eq});
    }
    for (int x = 0; x < d; ++x) {
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        r[static_cast<std::size_t>(x)] = 1.0;
        r[static_cast<std::size_t>(d)] = -1.0;
        cons.push_back({std::move(r), 0.0, Sense::ge});
    }

    LpBounds bounds;
    bounds.lo.assign(static_cast<std::size_t>(n), 0.0);
    bounds.hi.assign(static_cast<std::size_t>(n), 1.0);
    try {
        return -lp_solve(obj, cons, bounds).value;
    } catch (const Infeasible&) {
        return -1.0;
    }
}

} // namespace

int PmGame::num_symbols() const {
    int mx = -1;
    for (const auto& row : feedback)
        for (int s : row) mx = std::max(mx, s);
    return mx + 1;
}

void PmGame::validate() const {
    if (k() < 2 || d() < 2) throw DomainError("need k >= 2 actions and d >= 2 outcomes");
    for (double v : loss.a)
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("losses must lie in [0,1]");
    if (static_cast<int>(feedback.size()) != k()) throw DomainError("feedback row count mismatch");
    for (const auto& row : feedback) {
        if (static_cast<int>(row.size()) != d()) throw DomainError("feedback column count mismatch");
        for (int s : row)
            if (s < 0) throw DomainError("feedback symbols must be non-negative integers");
    }
    for (int a = 0; a < k(); ++a)
        for (int b = a + 1; b < k(); ++b) {
            bool dup = true;
            for (int x = 0; x < d(); ++x)
                if (std::abs(loss(a, x) - loss(b, x)) > 1e-12) {
                    dup = false;
                    break;
                }
            if (dup) throw DuplicateAction(a + 1, b + 1);
        }
}

std::vector<char> validate_game(const PmGame& game) {
    game.validate();
    const int k = game.k(), d = game.d();
    std::vector<char> pareto(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a) {
        std::vector<std::vector<double>> rows;
        for (int b = 0; b < k; ++b) {
            if (b == a) continue;
            std::vector<double> r(static_cast<std::size_t>(d));
            for (int x = 0; x < d; ++x) r[static_cast<std::size_t>(x)] = game.loss(a, x) - game.loss(b, x);
            rows.push_back(std::move(r));
        }
        double s = margin_lp(d, rows, nullptr);
        if (s <= kMarginTol) throw NonParetoAction(a + 1);
        pareto[static_cast<std::size_t>(a)] = 1;
    }
    return pareto;
}

std::vector<std::pair<int, int>> neighbor_graph(const PmGame& game,
                                                const std::vector<char>& pareto) {
    const int k = game.k(), d = game.d();
    if (static_cast<int>(pareto.size()) != k) throw DomainError("pareto flags size mismatch");
    for (char f : pareto)
        if (!f) throw DomainError("all actions must be Pareto optimal");

    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            std::vector<double> eq(static_cast<std::size_t>(d));
            for (int x = 0; x < d; ++x) eq[static_cast<std::size_t>(x)] = game.loss(a, x) - game.loss(b, x);
            std::vector<std::vector<double>> rows;
            for (int c = 0; c < k; ++c) {
                if (c == a || c == b) continue;
                std::vector<double> r(static_cast<std::size_t>(d));
                for (int x = 0; x < d; ++x) r[static_cast<std::size_t>(x)] = game.loss(a, x) - game.loss(c, x);
                rows.push_back(std::move(r));
            }
            // d = 2: the shared face is a point, so feasibility alone decides
            double s = margin_lp(d, rows, &eq);
            bool neighbor = d == 2 ? s >= 0.0 : s > kMarginTol;
            if (neighbor) edges.emplace_back(a, b);
        }
    }

    // connectivity (guaranteed for games meeting the standing assumptions)
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (auto [a, b] : edges) {
            int other = a == v ? b : (b == v ? a : -1);
            if (other >= 0 && !seen[static_cast<std::size_t>(other)]) {
                seen[static_cast<std::size_t>(other)] = 1;
                ++reached;
                bfs.push(other);
            }
        }
    }
    if (reached != k) throw DisconnectedNeighborGraph();
    return edges;
}

std::vector<std::vector<double>> estimation_functions(
    const PmGame& game, const std::vector<std::pair<int, int>>& edges,
    std::vector<double>* residuals) {
    const int k = game.k(), d = game.d(), S = game.num_symbols();
    std::vector<std::vector<double>> w;
    if (residuals) residuals->clear();

    // variables indexed (c, sigma) restricted to symbols that appear in row c
    for (auto [a, b] : edges) {
        Matrix A(d, k * S);
        std::vector<double> rhs(static_cast<std::size_t>(d));
        for (int x = 0; x < d; ++x) {
            for (int c = 0; c < k; ++c) A(x, c * S + game.feedback[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)]) += 1.0;
            rhs[static_cast<std::size_t>(x)] = game.loss(a, x) - game.loss(b, x);
        }
        try {
            w.push_back(least_norm_solve(A, rhs));
        } catch (const Inconsistent&) {
            throw NotGloballyObservable(a + 1, b + 1);
        }
        if (residuals) {
            double res = 0.0;
            for (int x = 0; x < d; ++x) {
                double lhs = 0.0;
                for (int c = 0; c < k; ++c)
                    lhs += w.back()[static_cast<std::size_t>(c * S + game.feedback[static_cast<std::size_t>(c)][static_cast<std::size_t>(x)])];
                res = std::max(res, std::abs(lhs - rhs[static_cast<std::size_t>(x)]));
            }
            residuals->push_back(res);
        }
    }
    return w;
}

void build_estimator(const PmGame& game, const std::vector<std::pair<int, int>>& edges,
                     const std::vector<std::vector<double>>& w, PmStructure& out) {
    const int k = game.k(), S = game.num_symbols();

    // BFS in-tree rooted at action 0
    out.parent.assign(static_cast<std::size_t>(k), -2);
    std::vector<int> edge_of(static_cast<std::size_t>(k), -1);  // edge used to reach vertex
    std::queue<int> bfs;
    bfs.push(0);
    out.parent[0] = -1;
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
            auto [a, b] = edges[static_cast<std::size_t>(e)];
            int other = a == v ? b : (b == v ? a : -1);
            if (other >= 0 && out.parent[static_cast<std::size_t>(other)] == -2) {
                out.parent[static_cast<std::size_t>(other)] = v;
                edge_of[static_cast<std::size_t>(other)] = e;
                bfs.push(other);
            }
        }
    }
    for (int v = 0; v < k; ++v)
        if (out.parent[static_cast<std::size_t>(v)] == -2) throw DisconnectedNeighborGraph();

    // G(a, sigma)_b = signed sum of w along the path b -> root; the stored w
    // of edge (x, y) with x < y targets L_x - L_y
    out.g.assign(static_cast<std::size_t>(k) * S * k, 0.0);
    for (int b = 0; b < k; ++b) {
        int v = b;
        while (out.parent[static_cast<std::size_t>(v)] != -1) {
            int p = out.parent[static_cast<std::size_t>(v)];
            int e = edge_of[static_cast<std::size_t>(v)];
            double sign = edges[static_cast<std::size_t>(e)].first == v ? 1.0 : -1.0;  // want L_v - L_p
            for (int a = 0; a < k; ++a)
                for (int s = 0; s < S; ++s)
                    out.g[(static_cast<std::size_t>(a) * S + s) * k + b] +=
                        sign * w[static_cast<std::size_t>(e)][static_cast<std::size_t>(a * S + s)];
            v = p;
        }
    }

    // ranging only over symbols that occur in row a; other slots are unused
    double gmax = 0.0;
    for (int a = 0; a < k; ++a)
        for (int x = 0; x < game.d(); ++x) {
            int s = game.feedback[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)];
            for (int b = 0; b < k; ++b)
                gmax = std::max(gmax, std::abs(out.G(a, s, b, k, S)));
        }
    out.c_g = std::max(1.0, k * gmax);
}

PmStructure analyze_game(const PmGame& game) {
    PmStructure s;
    s.pareto = validate_game(game);
    s.edges = neighbor_graph(game, s.pareto);
    s.w = estimation_functions(game, s.edges, &s.edge_residual);
    build_estimator(game, s.edges, s.w, s);
    return s;
}

std::vector<double> pm_loss_estimate(const PmStructure& s, int k, int chosen, int symbol,
                                     std::span<const double> p) {
    if (chosen < 0 || chosen >= k) throw DomainError("chosen action out of range");
    double pc = p[static_cast<std::size_t>(chosen)];
    if (!(pc > 0.0)) throw DomainError("selection probability of the chosen action is zero");
    const int S = static_cast<int>(s.g.size()) / (k * k);
    std::vector<double> y(static_cast<std::size_t>(k));
    for (int b = 0; b < k; ++b) y[static_cast<std::size_t>(b)] = s.G(chosen, symbol, b, k, S) / pc;
    return y;
}

std::pair<double, double> pm_zu(std::span<const double> q, double alpha, double c_g) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
    if (!(c_g >= 1.0)) throw DomainError("c_g must be >= 1");
    auto [lead, gap] = leader_and_gap(q);
    const auto& K = kernels::active();
    double moment = K.pow_sum(q.data(), q.size(), 2.0 - alpha);
    moment -= std::pow(q[static_cast<std::size_t>(lead)], 2.0 - alpha);
    moment += gap > 0.0 ? std::pow(gap, 2.0 - alpha) : 0.0;
    double z = 4.0 * c_g * c_g / (1.0 - alpha) * moment;
    double u = gap > 0.0 ? 8.0 * c_g / (1.0 - alpha) * std::pow(gap, 1.0 - alpha) : 0.0;
    return {z, u};
}

} // namespace spbm
