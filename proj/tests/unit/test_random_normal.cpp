#include "tempconf/normal.hpp"
#include "tempconf/random.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <set>

using namespace tempconf;

// Known-answer vectors from the Random123 distribution (kat_vectors, philox4x32 10 rounds).
TEST(Philox, KnownAnswerZero) {
    const PhiloxCounter out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
    const PhiloxCounter out = philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                            {0xffffffff, 0xffffffff});
    EXPECT_EQ(out, (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
    const PhiloxCounter out = philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                            {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out, (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(CounterRng, SameSeedSameStream) {
    CounterRng a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
    CounterRng a(42, 0), b(42, 1), c(43, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        same_ab += x == b.next_u64();
        same_ac += x == c.next_u64();
    }
    EXPECT_EQ(same_ab, 0);
    EXPECT_EQ(same_ac, 0);
}

TEST(CounterRng, UniformOpenIntervalAndMoments) {
    CounterRng rng(7);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sq += u * u;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.5, 3 * std::sqrt(1.0 / 12 / n) + 1e-4);
    EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12, 1e-3);
}

TEST(CounterRng, BelowIsInRangeAndRoughlyUniform) {
    CounterRng rng(9);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto k = rng.below(7);
        ASSERT_LT(k, 7u);
        ++counts[k];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
    EXPECT_LT(chi2, 22.46);  // 99.9% point of chi-square with 6 degrees of freedom
}

TEST(CounterRng, NormalMoments) {
    CounterRng rng(5);
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.01);
}

TEST(DeriveSeed, DistinctAndDeterministic) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(2025, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
    EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(NormalQuantile, KnownValues) {
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
    EXPECT_NEAR(normal_quantile(0.75), 0.6744897501960817, 1e-12);
    EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
    EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
}

TEST(NormalQuantile, AgreesWithErfBisection) {
    std::vector<double> ps{1e-300, 1e-100, 1e-20, 1e-10, 1e-6, 0.001, 0.01, 0.02425, 0.1, 0.3,
                           0.5,    0.7,    0.9,   0.97575, 0.99, 0.999, 1 - 1e-6, 1 - 1e-10};
    CounterRng rng(1);
    for (int i = 0; i < 500; ++i) ps.push_back(rng.uniform());
    for (double p : ps) {
        const double ref = oracle::normal_quantile_bisect(p);
        EXPECT_NEAR(normal_quantile(p), ref, 1e-10 * std::max(1.0, std::fabs(ref))) << "p=" << p;
    }
}

TEST(NormalQuantile, InvertsCdf) {
    for (double p = 0.001; p < 1.0; p += 0.00731) EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13);
}

TEST(NormalQuantile, Edges) {
    EXPECT_EQ(normal_quantile(0.0), -std::numeric_limits<double>::infinity());
    EXPECT_EQ(normal_quantile(1.0), std::numeric_limits<double>::infinity());
    EXPECT_TRUE(std::isnan(normal_quantile(-0.1)));
    EXPECT_TRUE(std::isnan(normal_quantile(1.5)));
}

TEST(NormalQuantile, OddSymmetry) {
    for (double p : {0.001, 0.02, 0.2, 0.4}) EXPECT_NEAR(normal_quantile(p), -normal_quantile(1 - p), 1e-12);
}
