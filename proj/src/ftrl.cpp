#include "spbm/ftrl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spbm/kernels.hpp"

namespace spbm {

double tsallis_entropy(std::span<const double> p, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
    const auto& K = kernels::active();
    double sum_pow = K.pow_sum(p.data(), p.size(), alpha);
    double sum = 0.0;
    for (double x : p) sum += x;
    double h = (sum_pow - sum) / alpha;
    return h > 0.0 ? h : 0.0;
}

double tsallis_entropy(const ProbVector& p, double alpha) {
    p.validate();
    return tsallis_entropy(p.span(), alpha);
}

double bregman_tsallis(const ProbVector& p, const ProbVector& q, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
    p.validate();
    q.validate();
    if (p.size() != q.size()) throw DomainError("dimension mismatch");
    for (double x : q.w)
        if (x <= 0.0) throw DomainError("q must be strictly interior");

    // -H_a is separable, so the divergence is the sum of scalar Bregman terms
    //   d_i = (1/a)(q_i^a - p_i^a) + q_i^{a-1} (p_i - q_i),
    // each non-negative by convexity of x -> -(1/a)(x^a - x).
    double d = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        double pi = p[i], qi = q[i];
        double qa = std::pow(qi, alpha);
        double pa = pi > 0.0 ? std::pow(pi, alpha) : 0.0;
        d += (qa - pa) / alpha + std::pow(qi, alpha - 1.0) * (pi - qi);
    }
    return d > 0.0 ? d : 0.0;
}

FtrlSolver::FtrlSolver(int k) : k_(k) {
    if (k < 2) throw DomainError("need at least 2 actions");
    c_.resize(static_cast<std::size_t>(k));
    y_.resize(static_cast<std::size_t>(k));
    t1_.resize(static_cast<std::size_t>(k));
    t2_.resize(static_cast<std::size_t>(k));
    q_.resize(static_cast<std::size_t>(k));
    tmp_.resize(static_cast<std::size_t>(k));
    shift_.resize(static_cast<std::size_t>(k));
}

// Solves g(q) = c per coordinate, g(q) = beta q^{a-1} + beta_bar q^{-a};
// returns S = sum q_i and dS/ds (c_i = s + shifted losses).
std::pair<double, double> FtrlSolver::eval(const HybridRegularizer& reg, double s,
                                           double c_floor) {
    const auto& K = kernels::active();
    const int k = k_;
    const double a = reg.alpha, b = reg.beta, bb = reg.beta_bar;
    double* c = c_.data();
    double* y = y_.data();
    double* t1 = t1_.data();
    double* t2 = t2_.data();
    double* q = q_.data();
    double* tmp = tmp_.data();

    for (int i = 0; i < k; ++i) {
        double ci = s + shift_[static_cast<std::size_t>(i)];
        c[i] = ci < c_floor ? ci : c_floor;
    }

    if (bb == 0.0) {
        // closed form: q = (beta / c)^{1/(1-a)}
        K.log_v(c, y, static_cast<std::size_t>(k));
        const double lb = std::log(b), inv = 1.0 / (1.0 - a);
        for (int i = 0; i < k; ++i) y[i] = (lb - y[i]) * inv;
        K.exp_v(y, q, static_cast<std::size_t>(k));
        double S = 0.0, dS = 0.0;
        for (int i = 0; i < k; ++i) {
            S += q[i];
            dS += q[i] / ((a - 1.0) * c[i]);
        }
        return {S, dS};
    }

    if (std::abs(a - 0.5) < 1e-12) {
        // both exponents are -1/2: q = ((beta+beta_bar)/c)^2
        const double B = b + bb;
        double S = 0.0, dS = 0.0;
        for (int i = 0; i < k; ++i) {
            double r = B / c[i];
            q[i] = r * r;
            S += q[i];
            dS += q[i] / (-0.5 * c[i]);
        }
        return {S, dS};
    }

    // Newton on y = log q from a certified lower bound; f is decreasing and
    // convex in y, so the iterates increase monotonically to the root.
    {
        K.log_v(c, y, static_cast<std::size_t>(k));
        const double lb = std::log(b), lbb = std::log(bb);
        const double inv1 = 1.0 / (1.0 - a), inv2 = 1.0 / a;
        for (int i = 0; i < k; ++i) {
            double y1 = (lb - y[i]) * inv1;
            double y2 = (lbb - y[i]) * inv2;
            y[i] = y1 > y2 ? y1 : y2;
        }
    }
    const double am1 = a - 1.0;
    bool converged = false;
    for (int it = 0; it < kMaxInner; ++it) {
        for (int i = 0; i < k; ++i) tmp[i] = am1 * y[i];
        K.exp_v(tmp, t1, static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) tmp[i] = -a * y[i];
        K.exp_v(tmp, t2, static_cast<std::size_t>(k));
        double worst = 0.0;
        for (int i = 0; i < k; ++i) {
            double u1 = b * t1[i], u2 = bb * t2[i];
            double f = u1 + u2 - c[i];
            double fp = am1 * u1 - a * u2;
            y[i] -= f / fp;
            double rel = std::abs(f) / c[i];
            if (rel > worst) worst = rel;
            t1[i] = u1;
            t2[i] = u2;
        }
        if (worst <= 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NumericError("FTRL inner solve did not converge", 0.0);

    double S = 0.0, dS = 0.0;
    const double bbb = b * bb;
    for (int i = 0; i < k; ++i) {
        q[i] = bbb / (t1[i] * t2[i]);  // t1*t2 = b*bb*exp(-y), so this is exp(y)
        S += q[i];
        dS += q[i] / (am1 * t1[i] - a * t2[i]);
    }
    return {S, dS};
}

FtrlResult FtrlSolver::solve(std::span<const double> loss, const HybridRegularizer& reg) {
    reg.validate();
    if (static_cast<int>(loss.size()) != k_) throw DomainError("loss dimension mismatch");
    for (double l : loss)
        if (!std::isfinite(l)) throw DomainError("non-finite loss");

    const double a = reg.alpha, b = reg.beta, bb = reg.beta_bar;
    const double base = b / a + bb / (1.0 - a);

    // shift losses so the minimum is zero (the objective is shift-invariant
    // on the simplex)
    double lmin = loss[0];
    for (double l : loss) lmin = std::min(lmin, l);
    for (int i = 0; i < k_; ++i)
        shift_[static_cast<std::size_t>(i)] = loss[static_cast<std::size_t>(i)] - lmin;

    const double c_floor = b * std::pow(kFloor, a - 1.0) + bb * std::pow(kFloor, -a);

    // bracket for s = base - dual: at s = g(1) the zero-loss coordinate
    // alone contributes 1 to the sum; at s = g(1/k) every coordinate is <= 1/k
    double s_lo = b + bb;  // g(1)
    double s_hi = b * std::pow(static_cast<double>(k_), 1.0 - a) +
                  bb * std::pow(static_cast<double>(k_), a);  // g(1/k)

    double s = warm_ ? std::clamp(warm_s_, s_lo, s_hi) : 0.5 * (s_lo + s_hi);
    double S = 0.0;
    int it = 0;
    for (; it < kMaxOuter; ++it) {
        auto [sum, dsum] = eval(reg, s, c_floor);
        S = sum;
        double diff = S - 1.0;
        if (std::abs(diff) <= 1e-13) break;
        // S is decreasing in s
        if (diff > 0.0)
            s_lo = s;
        else
            s_hi = s;
        if (s_hi - s_lo <= 1e-15 * std::max(1.0, s_hi)) break;
        double step = diff / dsum;  // Newton: ds = (S-1)/S'
        double s_next = s - step;
        if (!(s_next > s_lo && s_next < s_hi)) s_next = 0.5 * (s_lo + s_hi);
        s = s_next;
    }
    if (it == kMaxOuter)
        throw NumericError("FTRL dual search did not converge", std::abs(S - 1.0));
    warm_ = true;
    warm_s_ = s;

    // exact renormalization (relative change ~1e-13), then KKT audit
    FtrlResult res;
    res.outer_iterations = it + 1;
    res.q.assign(q_.begin(), q_.end());
    for (double& x : res.q) x /= S;

    const auto& K = kernels::active();
    K.pow_v(res.q.data(), t1_.data(), res.q.size(), a - 1.0);
    double grad_min = std::numeric_limits<double>::infinity(), grad_max = -grad_min;
    if (bb > 0.0) {
        K.pow_v(res.q.data(), t2_.data(), res.q.size(), -a);
        for (int i = 0; i < k_; ++i) {
            double g = shift_[static_cast<std::size_t>(i)] + base - b * t1_[static_cast<std::size_t>(i)] - bb * t2_[static_cast<std::size_t>(i)];
            grad_min = std::min(grad_min, g);
            grad_max = std::max(grad_max, g);
        }
    } else {
        for (int i = 0; i < k_; ++i) {
            double g = shift_[static_cast<std::size_t>(i)] + base - b * t1_[static_cast<std::size_t>(i)];
            grad_min = std::min(grad_min, g);
            grad_max = std::max(grad_max, g);
        }
    }
    res.dual = 0.5 * (grad_min + grad_max) + lmin;
    res.kkt_residual = 0.5 * (grad_max - grad_min);
    if (!(res.kkt_residual <= 1e-8))
        throw NumericError("FTRL stationarity residual too large", res.kkt_residual);
    return res;
}

FtrlResult ftrl_solve(std::span<const double> cumulative_loss, const HybridRegularizer& reg) {
    FtrlSolver solver(static_cast<int>(cumulative_loss.size()));
    return solver.solve(cumulative_loss, reg);
}

} // namespace spbm
