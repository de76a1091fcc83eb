#pragma once

// Monte-Carlo checks of the split-conformal and online-update coverage
// guarantees on synthetic data. Shared by the CLI and the acceptance suite.

#include "tempconf/benchmarks.hpp"

#include <cstddef>
#include <cstdint>

namespace tempconf {

struct SplitValidityConfig {
    std::size_t trials = 50;
    std::size_t n_cal = 1000;
    std::size_t n_test = 5000;
    double alpha = 0.05;
    std::uint64_t master_seed = 2025;

    void validate() const;
};

struct SplitValidityResult {
    double mean_coverage = 0.0;
    double standard_error = 0.0;  // across trials; 0 when trials == 1
    double lower = 0.0;           // 1 - alpha
    double upper = 0.0;           // 1 - alpha + 1/(n_cal + 1) + 3 SE
    std::size_t trials = 0;
    bool passed = false;
};

// Point predictor 0, absolute-residual scores on iid N(0, 1) draws; trial k uses
// seed derive_seed(master_seed, k).
SplitValidityResult validate_split_conformal(const SplitValidityConfig& cfg);

struct OnlineCoverageConfig {
    std::size_t length = 200000;
    double alpha = 0.05;
    double gamma0 = 0.01;
    double lambda = 0.01;
    double beta = 0.75;
    GarchParams process{0.05, 0.10, 0.85};
    double base_half_width = 0.0;  // <= 0: z_{1-alpha/2} times the unconditional sd
    double coverage_tolerance = 0.005;
    double settle_tolerance = 0.05;
    std::uint64_t seed = 2025;

    void validate() const;
};

struct OnlineCoverageResult {
    double running_coverage = 0.0;
    double threshold_half = 0.0;   // C after length/2 updates
    double threshold_final = 0.0;  // C after all updates
    double base_half_width = 0.0;
    bool coverage_ok = false;
    bool settled = false;
    bool passed = false;
};

// adaptive_update with kappa = 0 against the fixed band [-b - C, b + C] on a
// simulated GARCH(1,1) path.
OnlineCoverageResult validate_online_coverage(const OnlineCoverageConfig& cfg);

}  // namespace tempconf
