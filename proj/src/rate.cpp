#include "spbm/rate.hpp"

#include <algorithm>
#include <cmath>

namespace spbm {
namespace {

void require_finite_nonneg(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string(name) + " must be finite and >= 0");
}

// beta sequence produced by the chosen rule from (z, u, h_hat).
std::vector<double> generate_beta(const std::vector<double>& z, const std::vector<double>& u,
                                  const std::vector<double>& h_hat, int rule, double beta1) {
    const std::size_t T = z.size();
    if (u.size() != T || h_hat.size() != T) throw DomainError("sequence lengths differ");
    if (rule != 1 && rule != 2) throw DomainError("rule must be 1 or 2");
    for (double h : h_hat)
        if (!(h > 0.0)) throw DomainError("h_hat must be positive");
    std::vector<double> beta(T);
    if (rule == 1) {
        double prev = 0.0;  // beta_0 = 0
        for (std::size_t t = 0; t < T; ++t) {
            prev = rule1_update(prev, h_hat[t], z[t], u[t]);
            beta[t] = prev;
        }
    } else {
        if (!(beta1 > 0.0)) throw DomainError("beta1 must be positive");
        double prev = beta1;
        for (std::size_t t = 0; t < T; ++t) {
            if (t > 0) prev = prev + (2.0 * std::sqrt(z[t - 1] / prev) + u[t - 1] / prev) / h_hat[t];
            beta[t] = prev;
        }
    }
    return beta;
}

} // namespace

double rule2_update(SpbState& state, double z_prev, double u_prev) {
    require_finite_nonneg(z_prev, "z");
    require_finite_nonneg(u_prev, "u");
    if (!(state.last_h > 0.0)) throw DomainError("h_hat not available");
    if (!(state.beta > 0.0)) throw DomainError("beta must be positive");
    double inc = (2.0 * std::sqrt(z_prev / state.beta) + u_prev / state.beta) / state.last_h;
    state.beta += inc;
    state.round += 1;
    return state.beta;
}

double rule1_update(double beta_prev, double h_hat, double z, double u) {
    require_finite_nonneg(z, "z");
    require_finite_nonneg(u, "u");
    if (!(h_hat > 0.0)) throw DomainError("h_hat must be positive");
    if (!(beta_prev >= 0.0) || !std::isfinite(beta_prev))
        throw DomainError("beta_prev must be finite and >= 0");
    if (z == 0.0 && u == 0.0) return beta_prev;

    // residual r(beta) = beta - beta_prev - (2 sqrt(z/beta) + u/beta)/h_hat is
    // strictly increasing with r(0+) = -inf; expand the bracket geometrically
    auto resid = [&](double beta) {
        return beta - beta_prev - (2.0 * std::sqrt(z / beta) + u / beta) / h_hat;
    };
    double lo = beta_prev;
    double hi = std::max(beta_prev, 1.0) + 1.0;
    for (int i = 0; i < 200 && resid(hi) < 0.0; ++i) hi = 2.0 * hi + 1.0;
    if (resid(hi) < 0.0) throw NumericError("rule-1 bracket expansion failed", resid(hi));
    if (lo <= 0.0) lo = std::min(1e-300, hi * 0.5);

    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double r = resid(mid);
        if (std::abs(r) <= 1e-10) return mid;
        (r < 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    double beta = 0.5 * (lo + hi);
    if (std::abs(resid(beta)) > 1e-10)
        throw NumericError("rule-1 fixed point did not converge", std::abs(resid(beta)));
    return beta;
}

ExplorationRate exploration_rate(double z, double u, double beta) {
    require_finite_nonneg(z, "z");
    require_finite_nonneg(u, "u");
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
    double gp = std::sqrt(z / beta);
    double g = gp + u / beta;
    if (g > 0.5) throw GammaTooLarge(g);
    return {g, gp};
}

double eval_G1(const std::vector<double>& z, const std::vector<double>& h) {
    if (z.size() != h.size()) throw DomainError("sequence lengths differ");
    double prefix = 0.0, total = 0.0;
    for (std::size_t t = 0; t < z.size(); ++t) {
        if (!(h[t] > 0.0)) throw DomainError("h must be positive");
        if (!(z[t] >= 0.0)) throw DomainError("z must be non-negative");
        double sz = std::sqrt(z[t]);
        prefix += sz / h[t];
        if (sz > 0.0) total += sz / std::cbrt(prefix);
    }
    return total;
}

double eval_G2(const std::vector<double>& u, const std::vector<double>& h) {
    if (u.size() != h.size()) throw DomainError("sequence lengths differ");
    double prefix = 0.0, total = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        if (!(h[t] > 0.0)) throw DomainError("h must be positive");
        if (!(u[t] >= 0.0)) throw DomainError("u must be non-negative");
        prefix += u[t] / h[t];
        if (u[t] > 0.0) total += u[t] / std::sqrt(prefix);
    }
    return total;
}

double eval_F(const SpbSequences& seq) {
    seq.validate();
    double total = 0.0, prev = 0.0;  // beta_0 = 0
    for (std::size_t t = 0; t < seq.beta.size(); ++t) {
        double b = seq.beta[t];
        if (seq.z[t] > 0.0) total += 2.0 * std::sqrt(seq.z[t] / b);
        if (seq.u[t] > 0.0) total += seq.u[t] / b;
        total += (b - prev) * seq.h[t];
        prev = b;
    }
    return total;
}

Lemma1Report check_lemma1(const std::vector<double>& z_in, const std::vector<double>& u_in,
                          const std::vector<double>& h_in, int rule, double beta1) {
    Lemma1Report rep;
    rep.rule = rule;

    // Rounds with z = u = 0 before the first active round leave beta at 0
    // under rule 1 and contribute nothing to F, G1 or G2; drop them so the
    // generated sequence stays strictly positive. Rule 2 starts at beta1 > 0.
    std::vector<double> z = z_in, u = u_in, h = h_in;
    if (rule == 1) {
        std::size_t t0 = 0;
        while (t0 < z.size() && z[t0] == 0.0 && u[t0] == 0.0) ++t0;
        z.erase(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(t0));
        u.erase(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(t0));
        h.erase(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(t0));
    }
    rep.beta = generate_beta(z, u, h, rule, beta1);
    const std::size_t T = z.size();
    if (T == 0) {
        rep.F = rep.G1 = rep.G2 = rep.slack = 0.0;
        rep.rhs = rule == 2 && !h_in.empty() ? beta1 * h_in[0] : 0.0;
        rep.slack = rep.rhs;
        rep.holds = true;
        return rep;
    }
    rep.F = eval_F(SpbSequences{z, u, h, rep.beta});

    if (rule == 1) {
        rep.G1 = eval_G1(z, h);
        rep.G2 = eval_G2(u, h);
        rep.rhs = 3.2 * rep.G1 + 2.0 * rep.G2;
    } else {
        std::vector<double> shifted(h.begin() + 1, h.end());
        shifted.push_back(h.back());  // h_hat_{T+1} := h_hat_T
        rep.G1 = eval_G1(z, shifted);
        rep.G2 = eval_G2(u, shifted);
        double zmax = *std::max_element(z.begin(), z.end());
        double umax = *std::max_element(u.begin(), u.end());
        rep.rhs = 4.0 * rep.G1 + 3.0 * rep.G2 + 10.0 * std::sqrt(zmax / beta1) +
                  5.0 * umax / beta1 + beta1 * h[0];
    }
    rep.slack = rep.rhs - rep.F;
    rep.holds = rep.F <= rep.rhs + 1e-9 * std::max(1.0, rep.rhs);
    return rep;
}

Lemma2Report check_lemma2(const std::vector<double>& z, const std::vector<double>& h, int J) {
    if (J < 0) throw DomainError("J must be non-negative");
    Lemma2Report rep;
    rep.J = J;
    rep.G1 = eval_G1(z, h);
    const std::size_t T = z.size();
    if (T == 0) {
        rep.partition_bound = rep.min_bound = rep.j0_bound = 0.0;
        rep.slack_partition = rep.slack_min = rep.slack_j0 = 0.0;
        rep.holds = true;
        return rep;
    }
    double hmax = *std::max_element(h.begin(), h.end());
    double zmax = *std::max_element(z.begin(), z.end());

    // partition bound with theta_j = 2^{-j} h_max:
    // buckets j=1..J hold theta_{j-1} >= h_t > theta_j, bucket J+1 the rest
    double part = 0.0;
    {
        std::vector<double> bucket_sqrtz(static_cast<std::size_t>(J) + 1, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            int j = J;  // bucket J+1 (index J)
            for (int jj = 1; jj <= J; ++jj) {
                double theta_hi = std::ldexp(hmax, -(jj - 1));
                double theta_lo = std::ldexp(hmax, -jj);
                if (h[t] <= theta_hi && h[t] > theta_lo) {
                    j = jj - 1;
                    break;
                }
            }
            bucket_sqrtz[static_cast<std::size_t>(j)] += std::sqrt(z[t]);
        }
        for (int j = 0; j <= J; ++j) {
            double theta_prev = std::ldexp(hmax, -j);  // theta_{j-1} for bucket index j
            double v = std::sqrt(theta_prev) * bucket_sqrtz[static_cast<std::size_t>(j)];
            part += std::pow(v, 2.0 / 3.0);
        }
        part *= 1.5;
    }
    rep.partition_bound = part;

    double sum_zh = 0.0, sum_zhmax = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        sum_zh += std::sqrt(z[t] * h[t]);
        sum_zhmax += std::sqrt(z[t] * hmax);
    }
    double branch1 = std::pow(std::sqrt(2.0 * J) * sum_zh, 2.0 / 3.0) +
                     std::pow(std::exp2(-0.5 * J) * std::sqrt(zmax * hmax), 2.0 / 3.0) *
                         std::pow(static_cast<double>(T), 2.0 / 3.0);
    double branch2 = std::pow(sum_zhmax, 2.0 / 3.0);
    rep.j0_bound = 1.5 * branch2;
    rep.min_bound = 1.5 * std::min(branch1, branch2);

    rep.slack_partition = rep.partition_bound - rep.G1;
    rep.slack_min = rep.min_bound - rep.G1;
    rep.slack_j0 = rep.j0_bound - rep.G1;
    double tol = 1e-9;
    rep.holds = rep.G1 <= rep.partition_bound + tol * std::max(1.0, rep.partition_bound) &&
                rep.G1 <= rep.min_bound + tol * std::max(1.0, rep.min_bound);
    return rep;
}

Theorem3Report theorem3_eval(const std::vector<double>& z_in, const std::vector<double>& u_in,
                             const std::vector<double>& h_in, int rule, double beta1,
                             double epsilon) {
    if (z_in.empty()) throw DomainError("empty sequences");
    if (!(epsilon >= 1.0 / static_cast<double>(z_in.size())))
        throw DomainError("epsilon must be >= 1/T");
    std::vector<double> z = z_in, u = u_in, h_hat = h_in;
    if (rule == 1) {  // see check_lemma1
        std::size_t t0 = 0;
        while (t0 < z.size() && z[t0] == 0.0 && u[t0] == 0.0) ++t0;
        z.erase(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(t0));
        u.erase(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(t0));
        h_hat.erase(h_hat.begin(), h_hat.begin() + static_cast<std::ptrdiff_t>(t0));
    }
    const std::size_t T = z.size();
    if (T == 0) throw DomainError("all-zero sequences");
    auto beta = generate_beta(z, u, h_hat, rule, beta1);
    Theorem3Report rep;
    rep.epsilon = epsilon;
    rep.F = eval_F(SpbSequences{z, u, h_hat, beta});

    // rule 1 reads h_hat_t, rule 2 the shifted window h_hat_{t+1}
    std::vector<double> hw = h_hat;
    if (rule == 2) {
        hw.assign(h_hat.begin() + 1, h_hat.end());
        hw.push_back(h_hat.back());
    }
    double hmax = *std::max_element(hw.begin(), hw.end());
    double zmax = *std::max_element(z.begin(), z.end());
    double umax = *std::max_element(u.begin(), u.end());
    double logeT = std::log(epsilon * static_cast<double>(T));
    if (logeT < 0.0) logeT = 0.0;

    double sz_ln = 0.0, sz_max = 0.0, su_ln = 0.0, su_max = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        sz_ln += std::sqrt(z[t] * hw[t] * logeT);
        sz_max += std::sqrt(z[t] * hmax);
        su_ln += u[t] * hw[t] * logeT;
        su_max += u[t] * hmax;
    }
    rep.rhs_z = std::min(std::pow(sz_ln, 2.0 / 3.0) +
                             std::pow(std::sqrt(zmax * hmax) / epsilon, 2.0 / 3.0),
                         std::pow(sz_max, 2.0 / 3.0));
    rep.rhs_u = std::min(std::sqrt(su_ln) + std::sqrt(umax * hmax / epsilon),
                         std::sqrt(su_max));
    rep.rhs_extra = rule == 2
                        ? std::sqrt(zmax / beta1) + umax / beta1 + beta1 * h_hat[0]
                        : 0.0;
    double denom = rep.rhs_z + rep.rhs_u + rep.rhs_extra;
    rep.ratio = denom > 0.0 ? rep.F / denom : 0.0;
    return rep;
}

bool check_beta_lower_bounds(const std::vector<double>& beta, const std::vector<double>& z,
                             const std::vector<double>& u, const std::vector<double>& h_hat,
                             int rule, double beta1, double rel_tol) {
    const std::size_t T = beta.size();
    double sum_z = 0.0, sum_u = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (rule == 1) {
            sum_z += std::sqrt(z[t]) / h_hat[t];
            sum_u += u[t] / h_hat[t];
            double lhs32 = std::pow(beta[t], 1.5);
            double lhs2 = beta[t] * beta[t];
            if (lhs32 < 2.0 * sum_z * (1.0 - rel_tol)) return false;
            if (lhs2 < sum_u * (1.0 - rel_tol)) return false;
        } else {
            // bounds use sums over s < t with weights h_hat_{s+1}
            double lhs32 = std::pow(beta[t], 1.5);
            double lhs2 = beta[t] * beta[t];
            if (lhs32 < (std::pow(beta1, 1.5) + 2.0 * sum_z) * (1.0 - rel_tol)) return false;
            if (lhs2 < (beta1 * beta1 + sum_u) * (1.0 - rel_tol)) return false;
            if (t + 1 < T) {
                sum_z += std::sqrt(z[t]) / h_hat[t + 1];
                sum_u += u[t] / h_hat[t + 1];
            }
        }
    }
    return true;
}

} // namespace spbm
