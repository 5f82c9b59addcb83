#pragma once
// Exact FTRL over the probability simplex with the hybrid Tsallis regularizer
//
//   q = argmin_{p in simplex} <L, p> + beta * (-H_a(p)) + beta_bar * (-H_{1-a}(p)),
//
// solved through its KKT system: an outer safeguarded Newton search on the
// dual variable, with all k coordinate inverses evaluated in lockstep through
// the vector kernels.

#include <span>
#include <vector>

#include "spbm/prob.hpp"

namespace spbm {

struct HybridRegularizer {
    double alpha;     // Tsallis exponent, in (0,1)
    double beta;      // weight on -H_alpha, > 0
    double beta_bar;  // weight on -H_{1-alpha}, >= 0

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must be in (0,1)");
        if (!(beta > 0.0)) throw DomainError("beta must be positive");
        if (!(beta_bar >= 0.0)) throw DomainError("beta_bar must be non-negative");
    }
};

// Tsallis entropy H_a(p) = (1/a) sum_i (p_i^a - p_i), >= 0, zero at corners.
double tsallis_entropy(const ProbVector& p, double alpha);
double tsallis_entropy(std::span<const double> p, double alpha);

// Bregman divergence induced by -H_a, from q to p. q must be strictly
// interior (the gradient diverges at zero entries); p may touch the boundary.
double bregman_tsallis(const ProbVector& p, const ProbVector& q, double alpha);

struct FtrlResult {
    std::vector<double> q;   // strictly positive minimizer
    double dual;             // Lagrange multiplier of the simplex constraint
    double kkt_residual;     // max_i |grad_i(q) - dual|
    int outer_iterations;
};

// Reusable solver: keeps scratch buffers and a warm-started dual across calls
// with the same dimension (the harness calls it once per round).
class FtrlSolver {
public:
    explicit FtrlSolver(int k);

    FtrlResult solve(std::span<const double> cumulative_loss, const HybridRegularizer& reg);

    // iteration caps; exceeding either is a hard NumericError
    static constexpr int kMaxOuter = 200;
    static constexpr int kMaxInner = 100;
    static constexpr double kFloor = 1e-15;  // coordinate clamp before exponentiation

private:
    int k_;
    bool warm_ = false;
    double warm_s_ = 0.0;
    std::vector<double> c_, y_, t1_, t2_, q_, tmp_, shift_;

    // fills q_ with g^{-1}(c_i) for the current targets; returns (sum, d sum/d s)
    std::pair<double, double> eval(const HybridRegularizer& reg, double s, double c_floor);
};

// One-shot convenience wrapper.
FtrlResult ftrl_solve(std::span<const double> cumulative_loss, const HybridRegularizer& reg);

} // namespace spbm
