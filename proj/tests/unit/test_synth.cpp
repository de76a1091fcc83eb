#include "tempconf/errors.hpp"
#include "tempconf/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tempconf;

namespace {

struct Moments {
    double mean, sd;
};

Moments moments(std::span<const double> x) {
    double m = 0;
    for (double v : x) m += v;
    m /= x.size();
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (x.size() - 1))};
}

double autocorr(const std::vector<double>& x, std::size_t lag) {
    const auto [m, sd] = moments(x);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        den += (x[i] - m) * (x[i] - m);
        if (i >= lag) num += (x[i] - m) * (x[i - lag] - m);
    }
    return num / den;
}

std::vector<double> squares(const ReturnSeries& r) {
    std::vector<double> s;
    for (double v : r.values()) s.push_back(v * v);
    return s;
}

}  // namespace

TEST(IidGaussian, Deterministic) {
    EXPECT_EQ(gen_iid_gaussian(5, 0, 1, 17).values(), gen_iid_gaussian(5, 0, 1, 17).values());
    EXPECT_NE(gen_iid_gaussian(5, 0, 1, 17).values(), gen_iid_gaussian(5, 0, 1, 18).values());
}

TEST(IidGaussian, Moments) {
    const auto r = gen_iid_gaussian(100000, 0, 1, 1);
    const auto m = moments(r.span());
    EXPECT_NEAR(m.mean, 0.0, 0.01);
    EXPECT_NEAR(m.sd, 1.0, 0.01);
}

TEST(IidGaussian, Scaling) {
    const auto a = gen_iid_gaussian(200, 0.5, 1, 3);
    const auto b = gen_iid_gaussian(200, 0.5, 2, 3);
    for (std::size_t i = 0; i < 200; ++i) EXPECT_NEAR((b[i] - 0.5) / (a[i] - 0.5), 2.0, 1e-12);
}

TEST(IidGaussian, Preconditions) {
    EXPECT_THROW(gen_iid_gaussian(0, 0, 1, 1), PreconditionError);
    EXPECT_THROW(gen_iid_gaussian(10, 0, 0, 1), PreconditionError);
    EXPECT_EQ(gen_iid_gaussian(10, 0, 1, 1, ReturnUnits::log).units(), ReturnUnits::log);
}

TEST(Garch, DegenerateRecursionIsIid) {
    const auto g = gen_garch(1000, {0.25, 0.0, 0.0}, 4);
    const auto n = gen_iid_gaussian(1000, 0, 0.5, 4);
    for (std::size_t i = 0; i < 1000; ++i) EXPECT_NEAR(g[i], n[i], 1e-12);
}

TEST(Garch, StationaryVariance) {
    const auto r = gen_garch(100000, {0.05, 0.1, 0.85}, 5);
    const auto m = moments(r.span());
    EXPECT_NEAR(m.sd * m.sd, 1.0, 0.1);
}

TEST(Garch, VolatilityClustering) {
    const auto r = gen_garch(100000, {0.05, 0.1, 0.85}, 6);
    EXPECT_GT(autocorr(squares(r), 1), 0.0);
    EXPECT_GT(autocorr(squares(r), 1), autocorr(r.values(), 1));
}

TEST(Garch, PersistenceLengthensClusters) {
    for (std::uint64_t seed : {1, 2, 3}) {
        double prev = -1;
        for (double persistence : {0.5, 0.8, 0.95}) {
            const double a = 0.1;
            const GarchParams p{0.05, a, persistence - a};
            const double ac = autocorr(squares(gen_garch(50000, p, seed)), 10);
            EXPECT_GT(ac, prev) << "seed " << seed << " persistence " << persistence;
            prev = ac;
        }
    }
}

TEST(Regime, OneSegmentEqualsIid) {
    RegimeSpec spec{{{300, 1.5, 0.2}}};
    EXPECT_EQ(gen_regime_shift(spec, 8).values(), gen_iid_gaussian(300, 0.2, 1.5, 8).values());
}

TEST(Regime, SecondHalfScaled) {
    RegimeSpec spec{{{20000, 1.0, 0.0}, {20000, 2.0, 0.0}}};
    const auto r = gen_regime_shift(spec, 9);
    ASSERT_EQ(r.size(), 40000u);
    const double a = moments(r.span().first(20000)).sd;
    const double b = moments(r.span().subspan(20000)).sd;
    EXPECT_NEAR(b / a, 2.0, 0.2);
}

TEST(Regime, Preconditions) {
    EXPECT_THROW(gen_regime_shift(RegimeSpec{}, 1), PreconditionError);
    EXPECT_THROW(gen_regime_shift(RegimeSpec{{{0, 1.0, 0.0}}}, 1), PreconditionError);
    EXPECT_THROW(gen_regime_shift(RegimeSpec{{{10, -1.0, 0.0}}}, 1), PreconditionError);
}
