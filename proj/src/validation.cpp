#include "tempconf/validation.hpp"

#include "tempconf/conformal.hpp"
#include "tempconf/errors.hpp"
#include "tempconf/normal.hpp"
#include "tempconf/random.hpp"
#include "tempconf/simd/kernels.hpp"
#include "tempconf/synth.hpp"

#include <cmath>
#include <vector>

namespace tempconf {

void SplitValidityConfig::validate() const {
    if (trials == 0) throw PreconditionError("trials must be at least 1");
    if (n_cal == 0 || n_test == 0) throw PreconditionError("n_cal and n_test must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
}

SplitValidityResult validate_split_conformal(const SplitValidityConfig& cfg) {
    cfg.validate();
    std::vector<double> coverages;
    coverages.reserve(cfg.trials);
    std::vector<double> residuals(cfg.n_cal);
    for (std::size_t k = 0; k < cfg.trials; ++k) {
        const ReturnSeries draws = gen_iid_gaussian(cfg.n_cal + cfg.n_test, 0.0, 1.0,
                                                    derive_seed(cfg.master_seed, k));
        const auto y = draws.span();
        for (std::size_t i = 0; i < cfg.n_cal; ++i) residuals[i] = std::fabs(y[i]);
        const PredictionInterval iv =
            split_conformal_interval(ScoreSet(residuals), 0.0, cfg.alpha);
        std::size_t covered = 0;
        for (double v : y.subspan(cfg.n_cal)) covered += iv.covers(v) ? 1 : 0;
        coverages.push_back(static_cast<double>(covered) / static_cast<double>(cfg.n_test));
    }

    SplitValidityResult res;
    res.trials = cfg.trials;
    res.mean_coverage = simd::sum(coverages) / static_cast<double>(cfg.trials);
    if (cfg.trials > 1) {
        const double var = simd::sum_sq_dev(coverages, res.mean_coverage) /
                           static_cast<double>(cfg.trials - 1);
        res.standard_error = std::sqrt(var / static_cast<double>(cfg.trials));
    }
    res.lower = 1.0 - cfg.alpha;
    res.upper = 1.0 - cfg.alpha + 1.0 / static_cast<double>(cfg.n_cal + 1) +
                3.0 * res.standard_error;
    res.passed = res.mean_coverage >= res.lower && res.mean_coverage <= res.upper;
    return res;
}

void OnlineCoverageConfig::validate() const {
    if (length < 2) throw PreconditionError("length must be at least 2");
    process.validate();
    ConformalState s;
    s.alpha = alpha;
    s.gamma0 = gamma0;
    s.lambda = lambda;
    s.beta = beta;
    s.validate();
}

OnlineCoverageResult validate_online_coverage(const OnlineCoverageConfig& cfg) {
    cfg.validate();
    const ReturnSeries r = gen_garch(cfg.length, cfg.process, cfg.seed);
    const double b = cfg.base_half_width > 0.0
                         ? cfg.base_half_width
                         : normal_quantile(1.0 - cfg.alpha / 2.0) *
                               std::sqrt(cfg.process.unconditional_variance());

    ConformalState state;
    state.alpha = cfg.alpha;
    state.gamma0 = cfg.gamma0;
    state.lambda = cfg.lambda;
    state.beta = cfg.beta;

    OnlineCoverageResult res;
    res.base_half_width = b;
    std::size_t covered = 0;
    for (std::size_t t = 0; t < cfg.length; ++t) {
        const FormedInterval formed =
            form_interval(-b, b, state.threshold, static_cast<std::int64_t>(t));
        covered += formed.interval.covers(r[t]) ? 1 : 0;
        state = adaptive_update(state, r[t], formed.interval).state;
        if (t + 1 == cfg.length / 2) res.threshold_half = state.threshold;
    }
    res.threshold_final = state.threshold;
    res.running_coverage = static_cast<double>(covered) / static_cast<double>(cfg.length);
    res.coverage_ok =
        std::fabs(res.running_coverage - (1.0 - cfg.alpha)) <= cfg.coverage_tolerance;
    res.settled = std::fabs(res.threshold_final - res.threshold_half) < cfg.settle_tolerance;
    res.passed = res.coverage_ok && res.settled;
    return res;
}

}  // namespace tempconf
