#pragma once
// Dense two-phase primal simplex with Bland's rule. Instances here are tiny
// (at most a few dozen variables), so a plain tableau is plenty.

#include <vector>

#include "spbm/linalg.hpp"

namespace spbm {

enum class Sense { le, ge, eq };

struct LpConstraint {
    std::vector<double> row;
    double rhs;
    Sense sense;
};

struct LpBounds {
    // per-variable [lo, hi]; lo must be finite, hi may be +infinity
    std::vector<double> lo, hi;
};

struct LpSolution {
    double value;
    std::vector<double> x;
};

// Minimizes objective . x subject to the constraints and bounds. Returns a
// basic optimal solution with primal feasibility residual <= 1e-9. Throws
// Infeasible / Unbounded.
LpSolution lp_solve(const std::vector<double>& objective,
                    const std::vector<LpConstraint>& constraints, const LpBounds& bounds);

} // namespace spbm
