#include "tempconf/errors.hpp"
#include "tempconf/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace tempconf::simd {

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable& kernels(Isa isa) {
    if (!isa_supported(isa))
        throw PreconditionError("SIMD variant not supported on this CPU: " +
                                std::string(isa_name(isa)));
    switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return detail::avx2_table;
#endif
#if defined(__aarch64__)
        case Isa::neon: return detail::neon_table;
#endif
        default: return detail::scalar_table;
    }
}

namespace {

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("TEMPCONF_SIMD")) {
        const std::string_view want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
            if (want == isa_name(isa) && isa_supported(isa)) return kernels(isa);
    }
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (isa_supported(isa)) return kernels(isa);
    return detail::scalar_table;
}

void require_same(std::size_t a, std::size_t b) {
    if (a != b)
        throw DimensionError("kernel operands differ in length: " + std::to_string(a) + " vs " +
                             std::to_string(b));
}

}  // namespace

const KernelTable& kernels() noexcept {
    static const KernelTable& table = select();
    return table;
}

void pinball_subgradient(std::span<const double> u, double tau, std::span<double> out) {
    require_same(u.size(), out.size());
    kernels().pinball_subgradient(u.data(), u.size(), tau, out.data());
}

void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
    require_same(a.size(), b.size());
    require_same(a.size(), out.size());
    kernels().sub(a.data(), b.data(), a.size(), out.data());
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
    require_same(x.size(), y.size());
    kernels().axpy(s, x.data(), x.size(), y.data());
}

std::size_t count_covered(std::span<const double> r, std::span<const double> lo,
                          std::span<const double> hi) {
    require_same(r.size(), lo.size());
    require_same(r.size(), hi.size());
    return kernels().count_covered(r.data(), lo.data(), hi.data(), r.size());
}

}  // namespace tempconf::simd
