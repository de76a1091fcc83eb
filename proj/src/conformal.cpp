#include "tempconf/conformal.hpp"

#include "tempconf/errors.hpp"
#include "tempconf/order_stats.hpp"
#include "tempconf/simd/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace tempconf {

std::string_view model_name(ModelId id) noexcept {
    switch (id) {
        case ModelId::tcp: return "TCP";
        case ModelId::qr: return "QR";
        case ModelId::garch: return "GARCH";
        case ModelId::hist: return "HIST";
    }
    return "?";
}

ModelId parse_model_id(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "tcp") return ModelId::tcp;
    if (s == "qr") return ModelId::qr;
    if (s == "garch") return ModelId::garch;
    if (s == "hist") return ModelId::hist;
    throw PreconditionError("unknown model '" + std::string(name) + "'");
}

ScoreSet::ScoreSet(std::vector<double> scores) : scores_(std::move(scores)) {
    for (std::size_t i = 0; i < scores_.size(); ++i)
        if (!std::isfinite(scores_[i])) throw NumericError(i, "non-conformity score");
}

ScoreSet nonconformity_scores(std::span<const double> returns, std::span<const double> q_lo,
                              std::span<const double> q_hi) {
    if (returns.size() != q_lo.size() || returns.size() != q_hi.size())
        throw DimensionError("returns and quantile predictions differ in length");
    if (returns.empty()) throw EmptyInputError("no observations to score");
    const std::size_t n = returns.size();
    std::vector<double> scores(2 * n);
    const std::span<double> lo_part(scores.data(), n);
    const std::span<double> hi_part(scores.data() + n, n);
    simd::sub(returns, q_lo, lo_part);
    simd::sub(q_hi, returns, hi_part);
    return ScoreSet(std::move(scores));
}

double conformal_threshold(const ScoreSet& scores, double alpha, ThresholdMethod method) {
    if (scores.empty()) throw EmptyInputError("conformal threshold of an empty score set");
    const std::size_t n = scores.size();
    std::size_t k;
    if (method == ThresholdMethod::empirical) {
        k = rank_above(1.0 - alpha, n);
    } else {
        k = std::min(n, rank_above(1.0 - alpha, n + 1));
    }
    std::vector<double> copy = scores.values();
    return select_order_statistic(copy, k);
}

FormedInterval form_interval(double q_lo, double q_hi, double threshold, std::int64_t time_index,
                             ModelId model) {
    FormedInterval out;
    out.interval.time_index = time_index;
    out.interval.model = model;
    double lo = q_lo - threshold;
    double hi = q_hi + threshold;
    if (lo > hi) {
        const double mid = 0.5 * (lo + hi);
        lo = hi = mid;
        out.degenerate = true;
    }
    out.interval.lower = lo;
    out.interval.upper = hi;
    return out;
}

double coverage_error(double r, const PredictionInterval& iv, double alpha) noexcept {
    return (iv.covers(r) ? 0.0 : 1.0) - alpha;
}

void ConformalState::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    if (!(gamma0 > 0.0)) throw PreconditionError("gamma0 must be positive");
    if (!(lambda > 0.0)) throw PreconditionError("lambda must be positive");
    if (!(beta > 0.5 && beta <= 1.0)) throw PreconditionError("beta must lie in (0.5, 1]");
    if (!(kappa >= 0.0)) throw PreconditionError("kappa must be non-negative");
}

double learning_rate(const ConformalState& state) noexcept {
    return state.gamma0 / std::pow(1.0 + state.lambda * static_cast<double>(state.t), state.beta);
}

UpdateStep adaptive_update(const ConformalState& state, double r, const PredictionInterval& iv) {
    state.validate();
    UpdateStep step;
    step.state = state;
    step.gamma = learning_rate(state);
    step.error = coverage_error(r, iv, state.alpha);
    double c = state.threshold + step.gamma * step.error;
    if (iv.covers(r) && state.kappa > 0.0) {
        step.decay = state.kappa * step.gamma * std::fabs(c);
        c -= step.decay;
    }
    step.state.threshold = c;
    step.state.t = state.t + 1;
    return step;
}

double conformal_p_value(const ScoreSet& calibration, double test_score) {
    if (calibration.empty()) throw EmptyInputError("empty calibration set");
    const std::size_t ge = simd::count_ge(calibration.values(), test_score);
    return static_cast<double>(1 + ge) / static_cast<double>(calibration.size() + 1);
}

PredictionInterval split_conformal_interval(const ScoreSet& abs_residuals, double point_pred,
                                            double alpha) {
    if (abs_residuals.empty()) throw EmptyInputError("empty calibration set");
    for (double v : abs_residuals.values())
        if (v < 0.0) throw PreconditionError("absolute residuals must be non-negative");
    const double q = conformal_threshold(abs_residuals, alpha, ThresholdMethod::finite_sample);
    PredictionInterval iv;
    iv.lower = point_pred - q;
    iv.upper = point_pred + q;
    return iv;
}

}  // namespace tempconf
