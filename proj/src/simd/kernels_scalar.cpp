#include "tempconf/simd/kernels.hpp"

namespace tempconf::simd {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        acc += d * d;
    }
    return acc;
}

double pinball_sum_scalar(const double* u, std::size_t n, double tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = tau * u[i];
        const double b = (tau - 1.0) * u[i];
        acc += a > b ? a : b;
    }
    return acc;
}

void pinball_subgradient_scalar(const double* u, std::size_t n, double tau, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = u[i] < 0.0 ? tau - 1.0 : tau;
}

void sub_scalar(const double* a, const double* b, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void axpy_scalar(double s, const double* x, std::size_t n, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        const double p = s * x[i];
        y[i] = y[i] + p;
    }
}

std::size_t count_ge_scalar(const double* x, std::size_t n, double threshold) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += x[i] >= threshold ? 1 : 0;
    return c;
}

std::size_t count_covered_scalar(const double* r, const double* lo, const double* hi,
                                 std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (r[i] >= lo[i] && r[i] <= hi[i]) ? 1 : 0;
    return c;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{
    Isa::scalar,        sum_scalar, sum_sq_dev_scalar, pinball_sum_scalar,
    pinball_subgradient_scalar, sub_scalar, axpy_scalar, count_ge_scalar,
    count_covered_scalar,
};
}  // namespace detail

}  // namespace tempconf::simd
