#include "tempconf/simd/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace tempconf::simd {
namespace {

double sum_neon(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double sum_sq_dev_neon(const double* x, std::size_t n, double mean) {
    const float64x2_t m = vdupq_n_f64(mean);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x + i), m);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

double pinball_sum_neon(const double* u, std::size_t n, double tau) {
    const float64x2_t t = vdupq_n_f64(tau);
    const float64x2_t tm1 = vdupq_n_f64(tau - 1.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(u + i);
        acc = vaddq_f64(acc, vmaxq_f64(vmulq_f64(t, v), vmulq_f64(tm1, v)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double a = tau * u[i];
        const double b = (tau - 1.0) * u[i];
        s += a > b ? a : b;
    }
    return s;
}

void pinball_subgradient_neon(const double* u, std::size_t n, double tau, double* out) {
    const float64x2_t t = vdupq_n_f64(tau);
    const float64x2_t tm1 = vdupq_n_f64(tau - 1.0);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const uint64x2_t neg = vcltq_f64(vld1q_f64(u + i), zero);
        vst1q_f64(out + i, vbslq_f64(neg, tm1, t));
    }
    for (; i < n; ++i) out[i] = u[i] < 0.0 ? tau - 1.0 : tau;
}

void sub_neon(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void axpy_neon(double s, const double* x, std::size_t n, double* y) {
    const float64x2_t sv = vdupq_n_f64(s);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t p = vmulq_f64(sv, vld1q_f64(x + i));
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), p));
    }
    for (; i < n; ++i) {
        const double p = s * x[i];
        y[i] = y[i] + p;
    }
}

std::size_t count_ge_neon(const double* x, std::size_t n, double threshold) {
    const float64x2_t th = vdupq_n_f64(threshold);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // all-ones lanes shifted down to 1
        acc = vaddq_u64(acc, vshrq_n_u64(vcgeq_f64(vld1q_f64(x + i), th), 63));
    }
    std::size_t c = static_cast<std::size_t>(vaddvq_u64(acc));
    for (; i < n; ++i) c += x[i] >= threshold ? 1 : 0;
    return c;
}

std::size_t count_covered_neon(const double* r, const double* lo, const double* hi,
                               std::size_t n) {
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(r + i);
        const uint64x2_t in =
            vandq_u64(vcgeq_f64(v, vld1q_f64(lo + i)), vcleq_f64(v, vld1q_f64(hi + i)));
        acc = vaddq_u64(acc, vshrq_n_u64(in, 63));
    }
    std::size_t c = static_cast<std::size_t>(vaddvq_u64(acc));
    for (; i < n; ++i) c += (r[i] >= lo[i] && r[i] <= hi[i]) ? 1 : 0;
    return c;
}

}  // namespace

namespace detail {
const KernelTable neon_table{
    Isa::neon,        sum_neon, sum_sq_dev_neon, pinball_sum_neon,
    pinball_subgradient_neon, sub_neon, axpy_neon, count_ge_neon,
    count_covered_neon,
};
}  // namespace detail

}  // namespace tempconf::simd

#endif
