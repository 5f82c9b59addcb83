#include "spbm/linalg.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace spbm {

std::vector<double> least_norm_solve(const Matrix& A, const std::vector<double>& b) {
    if (static_cast<int>(b.size()) != A.rows) throw DomainError("rhs dimension mismatch");
    for (double v : A.a)
        if (!std::isfinite(v)) throw DomainError("non-finite matrix entry");
    for (double v : b)
        if (!std::isfinite(v)) throw DomainError("non-finite rhs entry");

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        M(A.a.data(), A.rows, A.cols);
    Eigen::Map<const Eigen::VectorXd> rhs(b.data(), A.rows);

    Eigen::VectorXd x = M.completeOrthogonalDecomposition().solve(rhs);
    double resid = (M * x - rhs).lpNorm<Eigen::Infinity>();
    if (!(resid <= 1e-8)) throw Inconsistent(resid);
    return {x.data(), x.data() + x.size()};
}

} // namespace spbm
