#pragma once
#include <cstddef>
#include <vector>

#include "spbm/errors.hpp"

namespace spbm {

// Small dense row-major matrix. Everything in this project is tiny (tens of
// rows), so no sparsity or views.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Minimum-Euclidean-norm x with ||Ax - b||_inf <= 1e-8, via an orthogonal
// (complete orthogonal) factorization. Throws Inconsistent when no solution
// meets the tolerance.
std::vector<double> least_norm_solve(const Matrix& A, const std::vector<double>& b);

} // namespace spbm
