#pragma once
// Independent reference implementations used to freeze expected values.
// Everything here is deliberately brute-force and kept apart from the
// library's own code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// ---- entropy / divergence (long double arithmetic) ----

inline long double tsallis_ld(const std::vector<double>& p, double alpha) {
    long double s = 0.0L;
    for (double x : p) s += std::pow(static_cast<long double>(x), static_cast<long double>(alpha)) - x;
    return s / alpha;
}

inline long double bregman_ld(const std::vector<double>& p, const std::vector<double>& q,
                              double alpha) {
    long double a = alpha;
    auto neg_h = [&](const std::vector<double>& v) {
        long double s = 0.0L;
        for (double x : v) s += static_cast<long double>(x) - std::pow(static_cast<long double>(x), a);
        return s / a;
    };
    long double d = neg_h(p) - neg_h(q);
    for (std::size_t i = 0; i < p.size(); ++i) {
        long double grad = 1.0L / a - std::pow(static_cast<long double>(q[i]), a - 1.0L);
        d -= grad * (static_cast<long double>(p[i]) - q[i]);
    }
    return d;
}

// ---- golden-section minimization of a convex 1-D function ----

inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double tol = 1e-12) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// FTRL objective at a point (long double)
inline double ftrl_objective(const std::vector<double>& L, const std::vector<double>& q,
                             double alpha, double beta, double beta_bar) {
    long double obj = 0.0L;
    long double a = alpha, ab = 1.0L - a;
    for (std::size_t i = 0; i < q.size(); ++i) {
        long double x = q[i];
        obj += static_cast<long double>(L[i]) * x;
        obj -= beta / a * (std::pow(x, a) - x);       // beta * (-H_a)
        obj -= beta_bar / ab * (std::pow(x, ab) - x); // beta_bar * (-H_{1-a})
    }
    return static_cast<double>(obj);
}

// grid + nested golden refinement oracle for the simplex minimizer, k = 2
inline std::vector<double> ftrl_oracle_k2(const std::vector<double>& L, double alpha,
                                          double beta, double beta_bar) {
    auto f = [&](double q1) {
        return ftrl_objective(L, {q1, 1.0 - q1}, alpha, beta, beta_bar);
    };
    double q1 = golden_min(f, 1e-12, 1.0 - 1e-12);
    return {q1, 1.0 - q1};
}

// k = 3: outer golden section over q3, inner over q1 (partial minimization of
// a jointly convex objective is convex)
inline std::vector<double> ftrl_oracle_k3(const std::vector<double>& L, double alpha,
                                          double beta, double beta_bar) {
    auto inner = [&](double q3) {
        auto f = [&](double q1) {
            return ftrl_objective(L, {q1, 1.0 - q3 - q1, q3}, alpha, beta, beta_bar);
        };
        double hi = 1.0 - q3 - 1e-12;
        double q1 = golden_min(f, 1e-12, hi, 1e-13);
        return std::pair<double, double>(f(q1), q1);
    };
    auto outer = [&](double q3) { return inner(q3).first; };
    double q3 = golden_min(outer, 1e-12, 1.0 - 1e-12, 1e-12);
    double q1 = inner(q3).second;
    return {q1, 1.0 - q3 - q1, q3};
}

// ---- learning-rate fixed point by plain bisection ----

inline double rule1_bisect(double beta_prev, double h_hat, double z, double u) {
    auto resid = [&](double b) {
        return b - beta_prev - (2.0 * std::sqrt(z / b) + u / b) / h_hat;
    };
    double lo = 1e-12, hi = 1.0;
    while (resid(hi) < 0.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (resid(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---- functional evaluators (Kahan / long double) ----

inline double F_ld(const std::vector<double>& beta, const std::vector<double>& z,
                   const std::vector<double>& u, const std::vector<double>& h) {
    long double total = 0.0L, prev = 0.0L;
    for (std::size_t t = 0; t < beta.size(); ++t) {
        if (z[t] > 0.0) total += 2.0L * std::sqrt(static_cast<long double>(z[t]) / beta[t]);
        if (u[t] > 0.0) total += static_cast<long double>(u[t]) / beta[t];
        total += (static_cast<long double>(beta[t]) - prev) * h[t];
        prev = beta[t];
    }
    return static_cast<double>(total);
}

inline double G1_ld(const std::vector<double>& z, const std::vector<double>& h) {
    long double prefix = 0.0L, total = 0.0L;
    for (std::size_t t = 0; t < z.size(); ++t) {
        long double sz = std::sqrt(static_cast<long double>(z[t]));
        prefix += sz / h[t];
        if (sz > 0.0L) total += sz / std::pow(prefix, 1.0L / 3.0L);
    }
    return static_cast<double>(total);
}

inline double G2_ld(const std::vector<double>& u, const std::vector<double>& h) {
    long double prefix = 0.0L, total = 0.0L;
    for (std::size_t t = 0; t < u.size(); ++t) {
        prefix += static_cast<long double>(u[t]) / h[t];
        if (u[t] > 0.0) total += static_cast<long double>(u[t]) / std::sqrt(prefix);
    }
    return static_cast<double>(total);
}

// ---- partial-monitoring cell geometry, d = 2 (exact interval structure) ----

struct IntervalCells {
    std::vector<bool> pareto;                     // interval of positive length
    std::vector<std::pair<int, int>> neighbors;   // adjacent intervals, a < b
};

// loss rows induce affine f_a(t) = L_{a,1} t + L_{a,2} (1-t) on t in [0,1];
// cells are where a attains the lower envelope
inline IntervalCells cells_d2(const std::vector<std::vector<double>>& loss) {
    const int k = static_cast<int>(loss.size());
    const int grid = 200000;
    std::vector<double> lo(static_cast<std::size_t>(k), 2.0), hi(static_cast<std::size_t>(k), -1.0);
    for (int g = 0; g <= grid; ++g) {
        double t = static_cast<double>(g) / grid;
        double best = 1e18;
        for (int a = 0; a < k; ++a)
            best = std::min(best, loss[static_cast<std::size_t>(a)][0] * t + loss[static_cast<std::size_t>(a)][1] * (1 - t));
        for (int a = 0; a < k; ++a) {
            double v = loss[static_cast<std::size_t>(a)][0] * t + loss[static_cast<std::size_t>(a)][1] * (1 - t);
            if (v <= best + 1e-12) {
                lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], t);
                hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], t);
            }
        }
    }
    IntervalCells out;
    out.pareto.resize(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a)
        out.pareto[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] > 2.0 / grid;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            if (!out.pareto[static_cast<std::size_t>(a)] || !out.pareto[static_cast<std::size_t>(b)]) continue;
            bool touch = std::abs(hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(b)]) <= 2.0 / grid ||
                         std::abs(hi[static_cast<std::size_t>(b)] - lo[static_cast<std::size_t>(a)]) <= 2.0 / grid;
            if (touch) out.neighbors.emplace_back(a, b);
        }
    return out;
}

// grid oracle over the outcome simplex, d = 3, resolution 1/200: an action is
// Pareto when it is the unique argmin somewhere
inline std::vector<bool> pareto_grid_d3(const std::vector<std::vector<double>>& loss) {
    const int k = static_cast<int>(loss.size());
    const int n = 200;
    std::vector<bool> pareto(static_cast<std::size_t>(k), false);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j + i <= n; ++j) {
            double x = static_cast<double>(i) / n, y = static_cast<double>(j) / n, zc = 1.0 - x - y;
            double best = 1e18;
            int argmin = -1, count = 0;
            for (int a = 0; a < k; ++a) {
                double v = loss[static_cast<std::size_t>(a)][0] * x + loss[static_cast<std::size_t>(a)][1] * y +
                           loss[static_cast<std::size_t>(a)][2] * zc;
                if (v < best - 1e-9) {
                    best = v;
                    argmin = a;
                    count = 1;
                } else if (v <= best + 1e-9) {
                    ++count;
                }
            }
            if (count == 1) pareto[static_cast<std::size_t>(argmin)] = true;
        }
    return pareto;
}

} // namespace oracle
