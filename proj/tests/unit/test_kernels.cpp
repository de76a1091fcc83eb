#include "tempconf/errors.hpp"
#include "tempconf/simd/kernels.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cstring>

using namespace tempconf;
using simd::Isa;

namespace {

std::vector<Isa> vector_variants() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (simd::isa_supported(isa)) out.push_back(isa);
    return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void expect_close(double ref, double got) {
    EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::fabs(ref)));
}

}  // namespace

TEST(Kernels, ScalarAlwaysSupported) {
    EXPECT_TRUE(simd::isa_supported(Isa::scalar));
    EXPECT_EQ(simd::kernels(Isa::scalar).isa, Isa::scalar);
    EXPECT_EQ(simd::isa_name(Isa::avx2), "avx2");
}

TEST(Kernels, UnsupportedVariantThrows) {
    for (Isa isa : {Isa::avx2, Isa::neon})
        if (!simd::isa_supported(isa)) EXPECT_THROW(simd::kernels(isa), PreconditionError);
}

TEST(Kernels, VariantsMatchScalarReference) {
    const auto& ref = simd::kernels(Isa::scalar);
    std::mt19937_64 g(11);
    for (Isa isa : vector_variants()) {
        const auto& k = simd::kernels(isa);
        for (std::size_t n = 0; n < 70; ++n) {
            for (int levels : {0, 3}) {
                const auto a = oracle::draw(g, n, levels);
                const auto b = oracle::draw(g, n, levels);
                auto c = oracle::draw(g, n, levels);
                const double tau = 0.025 + 0.95 * std::uniform_real_distribution<>(0, 1)(g);

                expect_close(ref.sum(a.data(), n), k.sum(a.data(), n));
                expect_close(ref.sum_sq_dev(a.data(), n, 0.3), k.sum_sq_dev(a.data(), n, 0.3));
                expect_close(ref.pinball_sum(a.data(), n, tau), k.pinball_sum(a.data(), n, tau));
                EXPECT_EQ(ref.count_ge(a.data(), n, 0.0), k.count_ge(a.data(), n, 0.0));
                EXPECT_EQ(ref.count_covered(a.data(), b.data(), c.data(), n),
                          k.count_covered(a.data(), b.data(), c.data(), n));

                std::vector<double> r1(n), r2(n);
                ref.pinball_subgradient(a.data(), n, tau, r1.data());
                k.pinball_subgradient(a.data(), n, tau, r2.data());
                for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(r1[i], r2[i]));

                ref.sub(a.data(), b.data(), n, r1.data());
                k.sub(a.data(), b.data(), n, r2.data());
                for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(r1[i], r2[i]));

                auto y1 = c, y2 = c;
                ref.axpy(0.1, a.data(), n, y1.data());
                k.axpy(0.1, a.data(), n, y2.data());
                for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(y1[i], y2[i]));
            }
        }
    }
}

TEST(Kernels, ScalarMatchesBruteForce) {
    const auto& k = simd::kernels(Isa::scalar);
    std::mt19937_64 g(3);
    const auto u = oracle::draw(g, 257);
    double pin = 0, sum = 0;
    std::size_t ge = 0;
    for (double x : u) {
        pin += oracle::pinball(x, 0.0, 0.9);
        sum += x;
        ge += x >= 0.25;
    }
    EXPECT_NEAR(k.pinball_sum(u.data(), u.size(), 0.9), pin, 1e-11);
    EXPECT_NEAR(k.sum(u.data(), u.size()), sum, 1e-11);
    EXPECT_EQ(k.count_ge(u.data(), u.size(), 0.25), ge);
}

TEST(Kernels, SubgradientTieUsesTau) {
    const std::vector<double> u{-1.0, 0.0, 2.0};
    std::vector<double> out(3);
    simd::pinball_subgradient(u, 0.3, out);
    EXPECT_DOUBLE_EQ(out[0], 0.3 - 1.0);
    EXPECT_DOUBLE_EQ(out[1], 0.3);
    EXPECT_DOUBLE_EQ(out[2], 0.3);
}

TEST(Kernels, CoveredBoundsAreInclusive) {
    const std::vector<double> r{1.0, 2.0, 3.0}, lo{1.0, 2.5, 0.0}, hi{1.0, 3.0, 3.0};
    EXPECT_EQ(simd::count_covered(r, lo, hi), 2u);
}

TEST(Kernels, SpanLengthMismatchThrows) {
    std::vector<double> a(3), b(4), out(3);
    EXPECT_THROW(simd::sub(a, b, out), DimensionError);
    EXPECT_THROW(simd::axpy(1.0, a, b), DimensionError);
    EXPECT_THROW(simd::pinball_subgradient(a, 0.5, b), DimensionError);
    EXPECT_THROW(simd::count_covered(a, a, b), DimensionError);
}
