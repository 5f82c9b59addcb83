#include "spbm/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spbm {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-9;

struct Tableau {
    int m, n;                            // rows, variable columns
    std::vector<std::vector<double>> t;  // m x (n+1), last column = rhs
    std::vector<int> basis;              // basis variable per row

    double& at(int i, int j) { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double at(int i, int j) const { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    void pivot(int pr, int pc) {
        double pv = at(pr, pc);
        for (int j = 0; j <= n; ++j) at(pr, j) /= pv;
        for (int i = 0; i < m; ++i) {
            if (i == pr) continue;
            double f = at(i, pc);
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) at(i, j) -= f * at(pr, j);
        }
        basis[static_cast<std::size_t>(pr)] = pc;
    }
};

// Bland's rule primal simplex on a feasible tableau; minimizes c.x.
// Returns false on unboundedness.
bool simplex(Tableau& tb, const std::vector<double>& c, int max_col) {
    for (long iter = 0; iter < 100000; ++iter) {
        // reduced costs r_j = c_j - c_B . column_j
        int enter = -1;
        for (int j = 0; j < max_col; ++j) {
            double r = c[static_cast<std::size_t>(j)];
            for (int i = 0; i < tb.m; ++i) {
                double cb = c[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])];
                if (cb != 0.0) r -= cb * tb.at(i, j);
            }
            if (r < -kCostEps) {
                enter = j;  // Bland: smallest improving index
                break;
            }
        }
        if (enter < 0) return true;

        // min-ratio test; near-ties resolved toward the largest pivot element
        // so degenerate bases never pivot on noise-scale entries
        int leave = -1;
        for (double min_pivot : {1e-9, kPivotEps}) {
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < tb.m; ++i) {
                double a = tb.at(i, enter);
                if (a > min_pivot) best = std::min(best, tb.at(i, tb.n) / a);
            }
            if (best == std::numeric_limits<double>::infinity()) continue;
            double tol = 1e-9 * (1.0 + std::abs(best));
            double best_pivot = 0.0;
            for (int i = 0; i < tb.m; ++i) {
                double a = tb.at(i, enter);
                if (a > min_pivot && tb.at(i, tb.n) / a <= best + tol && a > best_pivot) {
                    best_pivot = a;
                    leave = i;
                }
            }
            if (leave >= 0) break;
        }
        if (leave < 0) return false;
        tb.pivot(leave, enter);
    }
    throw NumericError("simplex iteration cap exceeded", 0.0);
}

} // namespace

LpSolution lp_solve(const std::vector<double>& objective,
                    const std::vector<LpConstraint>& constraints, const LpBounds& bounds) {
    const int nvar = static_cast<int>(objective.size());
    if (static_cast<int>(bounds.lo.size()) != nvar || static_cast<int>(bounds.hi.size()) != nvar)
        throw DomainError("bounds dimension mismatch");
    for (int j = 0; j < nvar; ++j) {
        if (!std::isfinite(bounds.lo[static_cast<std::size_t>(j)]))
            throw DomainError("lower bounds must be finite");
        if (bounds.hi[static_cast<std::size_t>(j)] < bounds.lo[static_cast<std::size_t>(j)])
            throw Infeasible();
    }

    // shift to x = lo + x', x' >= 0; finite upper bounds become <= rows
    std::vector<LpConstraint> rows;
    rows.reserve(constraints.size() + static_cast<std::size_t>(nvar));
    for (const auto& con : constraints) {
        if (static_cast<int>(con.row.size()) != nvar) throw DomainError("constraint dimension mismatch");
        double shift = 0.0;
        for (int j = 0; j < nvar; ++j) shift += con.row[static_cast<std::size_t>(j)] * bounds.lo[static_cast<std::size_t>(j)];
        rows.push_back({con.row, con.rhs - shift, con.sense});
    }
    for (int j = 0; j < nvar; ++j) {
        double hi = bounds.hi[static_cast<std::size_t>(j)];
        if (std::isfinite(hi)) {
            std::vector<double> r(static_cast<std::size_t>(nvar), 0.0);
            r[static_cast<std::size_t>(j)] = 1.0;
            rows.push_back({std::move(r), hi - bounds.lo[static_cast<std::size_t>(j)], Sense::le});
        }
    }

    const int m = static_cast<int>(rows.size());
    // slack count
    int nslack = 0;
    for (const auto& r : rows)
        if (r.sense != Sense::eq) ++nslack;
    const int n = nvar + nslack;           // structural + slack columns
    const int ntot = n + m;                // + one artificial per row

    Tableau tb;
    tb.m = m;
    tb.n = ntot;
    tb.t.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(ntot) + 1, 0.0));
    tb.basis.resize(static_cast<std::size_t>(m));

    int sl = nvar;
    for (int i = 0; i < m; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < nvar; ++j) tb.at(i, j) = r.row[static_cast<std::size_t>(j)];
        double rhs = r.rhs;
        if (r.sense == Sense::le) tb.at(i, sl++) = 1.0;
        else if (r.sense == Sense::ge) tb.at(i, sl++) = -1.0;
        if (rhs < 0.0) {
            for (int j = 0; j < n; ++j) tb.at(i, j) = -tb.at(i, j);
            rhs = -rhs;
        }
        tb.at(i, n + i) = 1.0;  // artificial
        tb.at(i, tb.n) = rhs;
        tb.basis[static_cast<std::size_t>(i)] = n + i;
    }

    // phase 1: minimize the artificial sum
    std::vector<double> c1(static_cast<std::size_t>(ntot), 0.0);
    for (int i = 0; i < m; ++i) c1[static_cast<std::size_t>(n + i)] = 1.0;
    if (!simplex(tb, c1, ntot)) throw NumericError("phase-1 simplex unbounded", 0.0);
    double art_sum = 0.0;
    for (int i = 0; i < m; ++i)
        if (tb.basis[static_cast<std::size_t>(i)] >= n) art_sum += tb.at(i, tb.n);
    if (art_sum > 1e-8) throw Infeasible();

    // drive leftover (degenerate) artificials out of the basis; pivot on the
    // largest eligible entry (already-basic columns are exact zeros in theory,
    // so anything tiny there is pivoting on noise)
    std::vector<int> keep;
    std::vector<char> is_basic(static_cast<std::size_t>(ntot), 0);
    for (int i = 0; i < m; ++i) is_basic[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])] = 1;
    for (int i = 0; i < m; ++i) {
        if (tb.basis[static_cast<std::size_t>(i)] < n) {
            keep.push_back(i);
            continue;
        }
        int pc = -1;
        double best = 1e-7;
        for (int j = 0; j < n; ++j) {
            if (is_basic[static_cast<std::size_t>(j)]) continue;
            double mag = std::abs(tb.at(i, j));
            if (mag > best) {
                best = mag;
                pc = j;
            }
        }
        if (pc >= 0) {
            is_basic[static_cast<std::size_t>(tb.basis[static_cast<std::size_t>(i)])] = 0;
            tb.pivot(i, pc);
            is_basic[static_cast<std::size_t>(pc)] = 1;
            keep.push_back(i);
        }
        // else: redundant row, dropped below
    }
    if (static_cast<int>(keep.size()) != m) {
        Tableau nt;
        nt.m = static_cast<int>(keep.size());
        nt.n = tb.n;
        for (int i : keep) {
            nt.t.push_back(tb.t[static_cast<std::size_t>(i)]);
            nt.basis.push_back(tb.basis[static_cast<std::size_t>(i)]);
        }
        tb = std::move(nt);
    }

    // phase 2 over structural + slack columns only
    std::vector<double> c2(static_cast<std::size_t>(ntot), 0.0);
    for (int j = 0; j < nvar; ++j) c2[static_cast<std::size_t>(j)] = objective[static_cast<std::size_t>(j)];
    if (!simplex(tb, c2, n)) throw Unbounded();

    std::vector<double> xp(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < tb.m; ++i) {
        int bvar = tb.basis[static_cast<std::size_t>(i)];
        if (bvar < n) xp[static_cast<std::size_t>(bvar)] = tb.at(i, tb.n);
    }

    LpSolution sol;
    sol.x.resize(static_cast<std::size_t>(nvar));
    sol.value = 0.0;
    for (int j = 0; j < nvar; ++j) {
        sol.x[static_cast<std::size_t>(j)] = bounds.lo[static_cast<std::size_t>(j)] + xp[static_cast<std::size_t>(j)];
        sol.value += objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    }

    // post-hoc feasibility audit
    for (const auto& con : constraints) {
        double lhs = 0.0;
        for (int j = 0; j < nvar; ++j) lhs += con.row[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
        double viol = 0.0;
        if (con.sense == Sense::le) viol = lhs - con.rhs;
        else if (con.sense == Sense::ge) viol = con.rhs - lhs;
        else viol = std::abs(lhs - con.rhs);
        if (viol > 1e-9 * std::max(1.0, std::abs(con.rhs)))
            throw NumericError("LP solution failed the feasibility audit", viol);
    }
    for (int j = 0; j < nvar; ++j) {
        if (sol.x[static_cast<std::size_t>(j)] < bounds.lo[static_cast<std::size_t>(j)] - 1e-9 ||
            sol.x[static_cast<std::size_t>(j)] > bounds.hi[static_cast<std::size_t>(j)] + 1e-9)
            throw NumericError("LP solution violates bounds", 0.0);
    }
    return sol;
}

} // namespace spbm
