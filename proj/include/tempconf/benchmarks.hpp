#pragma once

#include "tempconf/conformal.hpp"
#include "tempconf/errors.hpp"
#include "tempconf/quantile_model.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace tempconf {

// ---------------------------------------------------------------------------
// GARCH(1,1): sigma_t^2 = omega + alpha r_{t-1}^2 + beta sigma_{t-1}^2
// ---------------------------------------------------------------------------

struct GarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    // omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1.
    void validate() const;
    double persistence() const noexcept { return alpha + beta; }
    double unconditional_variance() const noexcept { return omega / (1.0 - alpha - beta); }
};

double garch_recursion(const GarchParams& p, double r_prev, double var_prev) noexcept;

// Gaussian quasi log-likelihood of r - mean. The first variance is the sample
// variance of the residuals. Throws NumericError naming the step on non-finite
// intermediates and InsufficientDataError for fewer than 10 observations.
double garch_loglik(const GarchParams& p, std::span<const double> r, double mean = 0.0);

struct GarchFit {
    GarchParams params;
    double loglik = 0.0;
    double mean = 0.0;
};

class GarchOptimizationError : public ModelError {
public:
    GarchOptimizationError(const std::string& what, GarchFit best)
        : ModelError(what), best_(best) {}
    const GarchFit& best() const noexcept { return best_; }

private:
    GarchFit best_;
};

struct GarchFitOptions {
    bool constant_mean = false;  // estimate with the sample mean instead of zero
    int max_evaluations = 4000;  // per Nelder-Mead run
};

// Maximum quasi-likelihood by Nelder-Mead over (log omega, logit persistence,
// logit alpha share) from 8 spread starts; returns the best restart.
// Needs at least 100 observations.
GarchFit fit_garch(std::span<const double> r, const GarchFitOptions& options = {});

// mean -/+ z_{1 - alpha/2} sqrt(variance).
PredictionInterval garch_interval(double variance, double alpha, double mean = 0.0);

// ---------------------------------------------------------------------------
// Historical simulation over a rolling window.
// ---------------------------------------------------------------------------

class HistWindow {
public:
    explicit HistWindow(std::size_t window = 252);

    void push(double r);
    bool full() const noexcept { return buffer_.size() == window_; }
    std::size_t window() const noexcept { return window_; }
    std::size_t size() const noexcept { return buffer_.size(); }
    std::vector<double> values() const { return {buffer_.begin(), buffer_.end()}; }
    double mean() const;

private:
    std::size_t window_;
    std::deque<double> buffer_;
};

// [order statistic ceil(alpha/2 n), order statistic ceil((1 - alpha/2) n)], or
// nullopt while the window is still filling.
std::optional<PredictionInterval> hist_sim_interval(const HistWindow& h, double alpha);

// ---------------------------------------------------------------------------
// Static quantile regression.
// ---------------------------------------------------------------------------

struct QrPrediction {
    PredictionInterval interval;
    bool crossed = false;
};

QrPrediction static_qr_predict(const QuantilePair& pair, const FeatureRow& row);
QrPrediction static_qr_predict(const QuantilePair& pair, std::span<const double> x);

}  // namespace tempconf
