#pragma once

#include "tempconf/data.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace tempconf {

class QuantileLevel {
public:
    // Throws PreconditionError unless 0 < tau < 1.
    explicit QuantileLevel(double tau);
    double value() const noexcept { return tau_; }

private:
    double tau_;
};

// Check loss: tau*(y - q) if y >= q, else (1 - tau)*(q - y).
double pinball_loss(double y, double q, double tau) noexcept;

// Derivative of pinball_loss in y (equivalently, minus the derivative in q):
// tau where y - q > 0, tau - 1 where y - q < 0, tau at the kink.
double pinball_subgradient(double y, double q, double tau) noexcept;

enum class SplitCriterion {
    pinball,      // exact pinball-loss reduction, children valued at their residual quantile
    subgradient,  // squared-gradient gain on the pinball subgradients (faster, approximate)
};

struct GBTConfig {
    int n_trees = 100;
    int max_depth = 3;
    double shrinkage = 0.1;
    int min_leaf = 20;
    double subsample = 1.0;
    std::uint64_t seed = 0;
    SplitCriterion criterion = SplitCriterion::pinball;

    void validate() const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf quantile of residuals, before shrinkage

    bool is_leaf() const noexcept { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict(const double* x) const noexcept;
};

class FittedQuantileModel {
public:
    FittedQuantileModel(QuantileLevel tau, double base_value, double shrinkage,
                        std::size_t feature_count, std::vector<RegressionTree> trees);

    QuantileLevel tau() const noexcept { return tau_; }
    double base_value() const noexcept { return base_value_; }
    double shrinkage() const noexcept { return shrinkage_; }
    std::size_t feature_count() const noexcept { return feature_count_; }
    const std::vector<RegressionTree>& trees() const noexcept { return trees_; }

    // Throws DimensionError when x does not have feature_count() entries.
    double predict(std::span<const double> x) const;
    double predict(const FeatureRow& row) const;
    // Row-major block; out.size() rows.
    void predict_rows(std::span<const double> rows, std::span<double> out) const;

private:
    QuantileLevel tau_;
    double base_value_;
    double shrinkage_;
    std::size_t feature_count_;
    std::vector<RegressionTree> trees_;
};

// Gradient boosting on the pinball loss. `rows` is row-major n x feature_count.
FittedQuantileModel fit_quantile_gbt(std::span<const double> rows, std::size_t feature_count,
                                     std::span<const double> targets, QuantileLevel tau,
                                     const GBTConfig& cfg);

// Fit on feature rows [begin, end) of X.
FittedQuantileModel fit_quantile_gbt(const FeatureMatrix& X, std::size_t begin, std::size_t end,
                                     QuantileLevel tau, const GBTConfig& cfg);

inline FittedQuantileModel fit_quantile_gbt(const FeatureMatrix& X, QuantileLevel tau,
                                            const GBTConfig& cfg) {
    return fit_quantile_gbt(X, 0, X.size(), tau, cfg);
}

struct QuantilePair {
    FittedQuantileModel lower;  // level alpha / 2
    FittedQuantileModel upper;  // level 1 - alpha / 2
};

// Throws PreconditionError unless 0 < alpha < 1.
QuantilePair fit_quantile_pair(std::span<const double> rows, std::size_t feature_count,
                               std::span<const double> targets, double alpha,
                               const GBTConfig& cfg);
QuantilePair fit_quantile_pair(const FeatureMatrix& X, std::size_t begin, std::size_t end,
                               double alpha, const GBTConfig& cfg);
inline QuantilePair fit_quantile_pair(const FeatureMatrix& X, double alpha, const GBTConfig& cfg) {
    return fit_quantile_pair(X, 0, X.size(), alpha, cfg);
}

struct QuantileBand {
    double lower;
    double upper;
    bool crossed;  // predictions came out inverted and were swapped
};

QuantileBand predict_band(const QuantilePair& pair, std::span<const double> x);
QuantileBand predict_band(const QuantilePair& pair, const FeatureRow& row);

}  // namespace tempconf
