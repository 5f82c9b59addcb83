#include "spbm/kernels.hpp"

#include <cmath>

namespace spbm::kernels {
namespace {

void exp_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

void log_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::log(x[i]);
}

void pow_scalar(const double* x, double* y, std::size_t n, double e) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::pow(x[i], e);
}

double pow_sum_scalar(const double* x, std::size_t n, double e) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > 0.0) s += std::pow(x[i], e);
    }
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

} // namespace

const Ops& scalar() {
    static const Ops ops{"scalar", exp_scalar, log_scalar, pow_scalar,
                         pow_sum_scalar, dot_scalar};
    return ops;
}

} // namespace spbm::kernels
