#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace tempconf {

enum class ModelId { tcp, qr, garch, hist };

std::string_view model_name(ModelId id) noexcept;
// Accepts tcp / qr / garch / hist (case-insensitive); throws PreconditionError.
ModelId parse_model_id(std::string_view name);

struct PredictionInterval {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t time_index = 0;
    ModelId model = ModelId::tcp;

    double width() const noexcept { return upper - lower; }
    // Bounds count as inside.
    bool covers(double r) const noexcept { return r >= lower && r <= upper; }
};

// Multiset of non-conformity scores.
class ScoreSet {
public:
    ScoreSet() = default;
    // Throws NumericError on non-finite scores.
    explicit ScoreSet(std::vector<double> scores);

    const std::vector<double>& values() const noexcept { return scores_; }
    std::size_t size() const noexcept { return scores_.size(); }
    bool empty() const noexcept { return scores_.empty(); }

private:
    std::vector<double> scores_;
};

// Pooled two-sided scores: for every i both r_i - q_lo_i and q_hi_i - r_i (2n
// values, positive when r_i lies inside the band). Throws DimensionError on
// length mismatch and EmptyInputError when empty.
ScoreSet nonconformity_scores(std::span<const double> returns, std::span<const double> q_lo,
                              std::span<const double> q_hi);

enum class ThresholdMethod {
    empirical,     // order statistic ceil((1 - alpha) n)
    finite_sample  // order statistic min(n, ceil((1 - alpha)(n + 1)))
};

// (1 - alpha)-quantile of the scores. Throws EmptyInputError.
double conformal_threshold(const ScoreSet& scores, double alpha, ThresholdMethod method);

struct FormedInterval {
    PredictionInterval interval;
    bool degenerate = false;  // [q_lo - C, q_hi + C] was inverted and collapsed to its midpoint
};

FormedInterval form_interval(double q_lo, double q_hi, double threshold,
                             std::int64_t time_index = 0, ModelId model = ModelId::tcp);

// e_t = 1(r outside [lower, upper]) - alpha.
double coverage_error(double r, const PredictionInterval& iv, double alpha) noexcept;

struct ConformalState {
    double threshold = 0.0;  // C_t
    std::uint64_t t = 0;     // updates applied so far
    double alpha = 0.05;
    double gamma0 = 0.01;
    double lambda = 0.01;
    double beta = 0.75;
    double kappa = 0.0;  // strength of the shrink-on-cover decay; 0 = plain Robbins-Monro

    // Throws PreconditionError if a hyperparameter is out of range.
    void validate() const;
};

// gamma_t = gamma0 / (1 + lambda t)^beta
double learning_rate(const ConformalState& state) noexcept;

struct UpdateStep {
    ConformalState state;
    double gamma = 0.0;     // step size used
    double error = 0.0;     // e_t
    double decay = 0.0;     // amount subtracted by the decay heuristic
};

// C <- C + gamma_t e_t; when r was covered and kappa > 0, additionally
// C <- C - kappa gamma_t |C|. Advances t.
UpdateStep adaptive_update(const ConformalState& state, double r, const PredictionInterval& iv);

// (1 + #{cal >= test}) / (n + 1). Throws EmptyInputError.
double conformal_p_value(const ScoreSet& calibration, double test_score);

// point_pred +/- the finite-sample threshold of absolute residuals.
// Throws EmptyInputError / PreconditionError for negative residuals.
PredictionInterval split_conformal_interval(const ScoreSet& abs_residuals, double point_pred,
                                            double alpha);

}  // namespace tempconf
