#include "tempconf/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#define TEMPCONF_AVX2 __attribute__((target("avx2")))

namespace tempconf::simd {
namespace {

TEMPCONF_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    const __m128d sh = _mm_unpackhi_pd(s, s);
    return _mm_cvtsd_f64(_mm_add_sd(s, sh));
}

TEMPCONF_AVX2 double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

TEMPCONF_AVX2 double sum_sq_dev_avx2(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

TEMPCONF_AVX2 double pinball_sum_avx2(const double* u, std::size_t n, double tau) {
    const __m256d t = _mm256_set1_pd(tau);
    const __m256d tm1 = _mm256_set1_pd(tau - 1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(u + i);
        acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_mul_pd(t, v), _mm256_mul_pd(tm1, v)));
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double a = tau * u[i];
        const double b = (tau - 1.0) * u[i];
        s += a > b ? a : b;
    }
    return s;
}

TEMPCONF_AVX2 void pinball_subgradient_avx2(const double* u, std::size_t n, double tau,
                                            double* out) {
    const __m256d t = _mm256_set1_pd(tau);
    const __m256d tm1 = _mm256_set1_pd(tau - 1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d neg = _mm256_cmp_pd(_mm256_loadu_pd(u + i), zero, _CMP_LT_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(t, tm1, neg));
    }
    for (; i < n; ++i) out[i] = u[i] < 0.0 ? tau - 1.0 : tau;
}

TEMPCONF_AVX2 void sub_avx2(const double* a, const double* b, std::size_t n, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

TEMPCONF_AVX2 void axpy_avx2(double s, const double* x, std::size_t n, double* y) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(sv, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
    }
    for (; i < n; ++i) {
        const double p = s * x[i];
        y[i] = y[i] + p;
    }
}

TEMPCONF_AVX2 std::size_t count_ge_avx2(const double* x, std::size_t n, double threshold) {
    const __m256d th = _mm256_set1_pd(threshold);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ge = _mm256_cmp_pd(_mm256_loadu_pd(x + i), th, _CMP_GE_OQ);
        c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(ge)));
    }
    for (; i < n; ++i) c += x[i] >= threshold ? 1 : 0;
    return c;
}

TEMPCONF_AVX2 std::size_t count_covered_avx2(const double* r, const double* lo, const double* hi,
                                             std::size_t n) {
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(r + i);
        const __m256d in_lo = _mm256_cmp_pd(v, _mm256_loadu_pd(lo + i), _CMP_GE_OQ);
        const __m256d in_hi = _mm256_cmp_pd(v, _mm256_loadu_pd(hi + i), _CMP_LE_OQ);
        c += static_cast<std::size_t>(
            __builtin_popcount(_mm256_movemask_pd(_mm256_and_pd(in_lo, in_hi))));
    }
    for (; i < n; ++i) c += (r[i] >= lo[i] && r[i] <= hi[i]) ? 1 : 0;
    return c;
}

}  // namespace

namespace detail {
const KernelTable avx2_table{
    Isa::avx2,        sum_avx2, sum_sq_dev_avx2, pinball_sum_avx2,
    pinball_subgradient_avx2, sub_avx2, axpy_avx2, count_ge_avx2,
    count_covered_avx2,
};
}  // namespace detail

}  // namespace tempconf::simd

#endif
