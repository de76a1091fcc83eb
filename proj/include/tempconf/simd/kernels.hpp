#pragma once

// Data-parallel inner loops used across the library. Every kernel has a scalar
// reference implementation; vector variants (AVX2 on x86-64, NEON on AArch64)
// are chosen once at startup from what the running CPU supports.
//
// Elementwise kernels produce bit-identical results across variants. Reductions
// (sum, sum_sq_dev, pinball_sum) reassociate the additions and agree with the
// scalar reference to a relative 1e-12 on well-scaled data.
//
// Set TEMPCONF_SIMD=scalar (or avx2 / neon) to force a variant.

#include <cstddef>
#include <span>
#include <string_view>

namespace tempconf::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    Isa isa;
    double (*sum)(const double* x, std::size_t n);
    // sum of (x_i - mean)^2
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);
    // sum of rho_tau(u_i), rho_tau(u) = max(tau*u, (tau-1)*u)
    double (*pinball_sum)(const double* u, std::size_t n, double tau);
    // out_i = d rho_tau / du at u_i: tau for u >= 0, tau - 1 for u < 0
    void (*pinball_subgradient)(const double* u, std::size_t n, double tau, double* out);
    // out = a - b
    void (*sub)(const double* a, const double* b, std::size_t n, double* out);
    // y += s * x
    void (*axpy)(double s, const double* x, std::size_t n, double* y);
    // number of x_i >= threshold
    std::size_t (*count_ge)(const double* x, std::size_t n, double threshold);
    // number of i with lo_i <= r_i <= hi_i
    std::size_t (*count_covered)(const double* r, const double* lo, const double* hi,
                                 std::size_t n);
};

bool isa_supported(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

// Table for a specific variant; throws PreconditionError if the CPU lacks it.
const KernelTable& kernels(Isa isa);

// Table selected at startup (best supported, or the TEMPCONF_SIMD override).
const KernelTable& kernels() noexcept;

namespace detail {
extern const KernelTable scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
extern const KernelTable avx2_table;
#endif
#if defined(__aarch64__)
extern const KernelTable neon_table;
#endif
}  // namespace detail

// Span conveniences over the active table.

inline double sum(std::span<const double> x) { return kernels().sum(x.data(), x.size()); }

inline double sum_sq_dev(std::span<const double> x, double mean) {
    return kernels().sum_sq_dev(x.data(), x.size(), mean);
}

inline double pinball_sum(std::span<const double> u, double tau) {
    return kernels().pinball_sum(u.data(), u.size(), tau);
}

void pinball_subgradient(std::span<const double> u, double tau, std::span<double> out);
void sub(std::span<const double> a, std::span<const double> b, std::span<double> out);
void axpy(double s, std::span<const double> x, std::span<double> y);

inline std::size_t count_ge(std::span<const double> x, double threshold) {
    return kernels().count_ge(x.data(), x.size(), threshold);
}

std::size_t count_covered(std::span<const double> r, std::span<const double> lo,
                          std::span<const double> hi);

}  // namespace tempconf::simd
