#pragma once
// Learning-rate updates that match the stability, penalty and bias terms of
// the regret decomposition, plus the F / G1 / G2 functionals and the
// certification checkers built on them.

#include <cstdint>
#include <vector>

#include "spbm/errors.hpp"

namespace spbm {

// Per-agent learning-rate state. `last_h` carries h_{t-1}, the penalty
// component of the previous round, which serves as h_hat for the next update.
struct SpbState {
    double alpha;
    double beta1;
    double beta_bar;
    double beta;    // current beta_t, >= beta1
    double last_h;  // h_hat carrier, > 0 once round >= 1
    long round = 0;

    SpbState(double alpha_, double beta1_, double beta_bar_)
        : alpha(alpha_), beta1(beta1_), beta_bar(beta_bar_), beta(beta1_), last_h(0.0) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
        if (!(beta1 > 0.0)) throw DomainError("beta1 must be positive");
        if (!(beta_bar >= 0.0)) throw DomainError("beta_bar must be non-negative");
    }
};

struct SpbSequences {
    std::vector<double> z, u, h, beta;

    void validate() const {
        if (z.size() != u.size() || z.size() != h.size() || z.size() != beta.size())
            throw DomainError("sequence lengths differ");
        for (double v : z)
            if (!(v >= 0.0)) throw DomainError("z must be non-negative");
        for (double v : u)
            if (!(v >= 0.0)) throw DomainError("u must be non-negative");
        for (double v : h)
            if (!(v > 0.0)) throw DomainError("h must be positive");
        for (double v : beta)
            if (!(v > 0.0)) throw DomainError("beta must be positive");
    }
};

// Explicit update: beta_t = beta_{t-1} + (1/h_hat_t)(2 sqrt(z_{t-1}/beta_{t-1})
// + u_{t-1}/beta_{t-1}), with h_hat_t = state.last_h. Advances the state.
double rule2_update(SpbState& state, double z_prev, double u_prev);

// Implicit update: the unique beta >= beta_prev with
// beta = beta_prev + (1/h_hat)(2 sqrt(z/beta) + u/beta); fixed-point residual
// <= 1e-10, found by bracketed bisection on the monotone residual.
double rule1_update(double beta_prev, double h_hat, double z, double u);

struct ExplorationRate {
    double gamma;        // sqrt(z/beta) + u/beta
    double gamma_prime;  // sqrt(z/beta)
};

// Throws GammaTooLarge when the rate exceeds 1/2 (beta1 configured too small).
ExplorationRate exploration_rate(double z, double u, double beta);

// G1 = sum_t sqrt(z_t) / (sum_{s<=t} sqrt(z_s)/h_s)^{1/3}; a term whose
// prefix sum is zero has a zero numerator too and contributes 0.
double eval_G1(const std::vector<double>& z, const std::vector<double>& h);

// G2 = sum_t u_t / sqrt(sum_{s<=t} u_s/h_s), same zero-over-zero convention.
double eval_G2(const std::vector<double>& u, const std::vector<double>& h);

// F = sum_t [ 2 sqrt(z_t/beta_t) + u_t/beta_t + (beta_t - beta_{t-1}) h_t ]
// with beta_0 = 0. Terms with z_t = u_t = 0 and beta_t = 0 contribute only
// their penalty part.
double eval_F(const SpbSequences& seq);

struct Lemma1Report {
    int rule;
    double F, G1, G2, rhs, slack;
    std::vector<double> beta;
    bool holds;
};

// Generates beta_{1:T} by the chosen rule (rule 1 starts from beta_0 = 0;
// rule 2 starts at beta_1) with h_hat as both the h and h_hat sequences,
// evaluates F, and compares against the corresponding bound:
//   rule 1: F <= 3.2 G1(z, h) + 2 G2(u, h)
//   rule 2: F <= 4 G1(z, h_{2:T+1}) + 3 G2(u, h_{2:T+1})
//           + 10 sqrt(z_max/beta1) + 5 u_max/beta1 + beta1 h_1,
// where the shifted window is completed with h_hat_{T+1} := h_hat_T.
Lemma1Report check_lemma1(const std::vector<double>& z, const std::vector<double>& u,
                          const std::vector<double>& h_hat, int rule, double beta1);

struct Lemma2Report {
    int J;
    double G1;
    double partition_bound;  // (3/2) sum_j (sqrt(theta_{j-1}) sum_{T_j} sqrt(z_t))^{2/3}
    double min_bound;        // (3/2) min{ J-indexed form , (sum sqrt(z_t h_max))^{2/3} }
    double j0_bound;         // (3/2) (sum sqrt(z_t h_max))^{2/3}
    double slack_partition, slack_min, slack_j0;
    bool holds;
};

// Both displayed bounds with thresholds theta_j = 2^{-j} h_max.
Lemma2Report check_lemma2(const std::vector<double>& z, const std::vector<double>& h, int J);

struct Theorem3Report {
    double epsilon;
    double F;
    double rhs_z;      // stability min-form (without the 3/2-style constants)
    double rhs_u;      // bias min-form
    double rhs_extra;  // rule-2 additive terms, 0 for rule 1
    double ratio;      // F / (rhs_z + rhs_u + rhs_extra)
};

// Evaluates the epsilon-indexed min-forms for a trajectory generated by the
// chosen rule. The bound's absolute constants are unspecified, so this is a
// diagnostic ratio, not a pass/fail check.
Theorem3Report theorem3_eval(const std::vector<double>& z, const std::vector<double>& u,
                             const std::vector<double>& h_hat, int rule, double beta1,
                             double epsilon);

// Proof-side lower bounds on the learning-rate trajectory.
//   rule 1: beta_t^{3/2} >= 2 sum_{s<=t} sqrt(z_s)/h_s and
//           beta_t^2    >=   sum_{s<=t} u_s/h_s
//   rule 2: beta_t^{3/2} >= beta_1^{3/2} + 2 sum_{s<t} sqrt(z_s)/h_{s+1} and
//           beta_t^2    >= beta_1^2    +   sum_{s<t} u_s/h_{s+1}
bool check_beta_lower_bounds(const std::vector<double>& beta, const std::vector<double>& z,
                             const std::vector<double>& u, const std::vector<double>& h_hat,
                             int rule, double beta1, double rel_tol = 1e-9);

} // namespace spbm
