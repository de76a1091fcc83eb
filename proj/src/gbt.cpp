#include "tempconf/errors.hpp"
#include "tempconf/order_stats.hpp"
#include "tempconf/quantile_model.hpp"
#include "tempconf/random.hpp"
#include "tempconf/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tempconf {

QuantileLevel::QuantileLevel(double tau) : tau_(tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw PreconditionError("quantile level must lie in (0, 1), got " + std::to_string(tau));
}

double pinball_loss(double y, double q, double tau) noexcept {
    return y >= q ? tau * (y - q) : (1.0 - tau) * (q - y);
}

double pinball_subgradient(double y, double q, double tau) noexcept {
    return y - q < 0.0 ? tau - 1.0 : tau;
}

void GBTConfig::validate() const {
    if (n_trees < 0) throw PreconditionError("n_trees must be >= 0");
    if (max_depth < 1) throw PreconditionError("max_depth must be >= 1");
    if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw PreconditionError("shrinkage must be in (0, 1]");
    if (min_leaf < 1) throw PreconditionError("min_leaf must be >= 1");
    if (!(subsample > 0.0 && subsample <= 1.0)) throw PreconditionError("subsample must be in (0, 1]");
}

double RegressionTree::predict(const double* x) const noexcept {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        i = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

FittedQuantileModel::FittedQuantileModel(QuantileLevel tau, double base_value, double shrinkage,
                                         std::size_t feature_count,
                                         std::vector<RegressionTree> trees)
    : tau_(tau),
      base_value_(base_value),
      shrinkage_(shrinkage),
      feature_count_(feature_count),
      trees_(std::move(trees)) {}

double FittedQuantileModel::predict(std::span<const double> x) const {
    if (x.size() != feature_count_)
        throw DimensionError("model expects " + std::to_string(feature_count_) +
                             " features, got " + std::to_string(x.size()));
    double acc = base_value_;
    for (const auto& tree : trees_) acc += shrinkage_ * tree.predict(x.data());
    return acc;
}

double FittedQuantileModel::predict(const FeatureRow& row) const {
    const auto a = row.as_array();
    return predict(std::span<const double>(a));
}

void FittedQuantileModel::predict_rows(std::span<const double> rows, std::span<double> out) const {
    if (rows.size() != out.size() * feature_count_)
        throw DimensionError("row block does not match output length and feature count");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict(rows.subspan(i * feature_count_, feature_count_));
}

namespace {

// Fenwick trees over node-local residual ranks. The full set is static; the
// left child grows one element at a time and the right child is full - left.
class SplitFenwick {
public:
    void build(std::span<const double> sorted_values, double tau) {
        tau_ = tau;
        values_ = sorted_values;
        n_ = sorted_values.size();
        rank_.resize(n_ + 1);
        for (std::size_t n = 0; n <= n_; ++n) rank_[n] = static_cast<int>(rank_above(tau, n));
        full_cnt_.assign(n_ + 1, 0);
        full_sum_.assign(n_ + 1, 0.0);
        left_cnt_.assign(n_ + 1, 0);
        left_sum_.assign(n_ + 1, 0.0);
        step_ = 1;
        while (step_ * 2 <= n_) step_ *= 2;
        for (std::size_t i = 1; i <= n_; ++i) {
            full_cnt_[i] += 1;
            full_sum_[i] += sorted_values[i - 1];
            const std::size_t j = i + (i & (~i + 1));
            if (j <= n_) {
                full_cnt_[j] += full_cnt_[i];
                full_sum_[j] += full_sum_[i];
            }
        }
        full_total_ = 0.0;
        for (double v : sorted_values) full_total_ += v;
        reset_left();
    }

    void reset_left() {
        std::fill(left_cnt_.begin(), left_cnt_.end(), 0);
        std::fill(left_sum_.begin(), left_sum_.end(), 0.0);
        left_n_ = 0;
        left_total_ = 0.0;
    }

    void move_left(std::size_t pos) {
        const double v = values_[pos];
        ++left_n_;
        left_total_ += v;
        for (std::size_t i = pos + 1; i <= n_; i += i & (~i + 1)) {
            left_cnt_[i] += 1;
            left_sum_[i] += v;
        }
    }

    double loss_full() const { return loss<Part::full>(); }
    double loss_left() const { return loss<Part::left>(); }
    double loss_right() const { return loss<Part::right>(); }

private:
    enum class Part { full, left, right };

    template <Part P>
    int cnt_at(std::size_t i) const {
        if constexpr (P == Part::full) return full_cnt_[i];
        else if constexpr (P == Part::left) return left_cnt_[i];
        else return full_cnt_[i] - left_cnt_[i];
    }

    template <Part P>
    double sum_at(std::size_t i) const {
        if constexpr (P == Part::full) return full_sum_[i];
        else if constexpr (P == Part::left) return left_sum_[i];
        else return full_sum_[i] - left_sum_[i];
    }

    // min over constant q of sum rho_tau(v - q), attained at the rank_above(tau)
    // element. One binary-lifting pass finds that element and the count and sum
    // of everything ranked before it.
    template <Part P>
    double loss() const {
        int n;
        double total;
        if constexpr (P == Part::full) n = static_cast<int>(n_), total = full_total_;
        else if constexpr (P == Part::left) n = left_n_, total = left_total_;
        else n = static_cast<int>(n_) - left_n_, total = full_total_ - left_total_;

        int k = rank_[static_cast<std::size_t>(n)];
        std::size_t pos = 0;
        int below_cnt = 0;
        double below_sum = 0.0;
        for (std::size_t s = step_; s > 0; s >>= 1) {
            const std::size_t next = pos + s;
            if (next <= n_) {
                const int c = cnt_at<P>(next);
                if (c < k) {
                    pos = next;
                    k -= c;
                    below_cnt += c;
                    below_sum += sum_at<P>(next);
                }
            }
        }
        const double q = values_[pos];
        const int c = below_cnt + 1;
        const double s = below_sum + q;
        const double above = total - s - q * static_cast<double>(n - c);
        const double below = q * static_cast<double>(c) - s;
        return tau_ * above + (1.0 - tau_) * below;
    }

    double tau_ = 0.5;
    std::span<const double> values_;
    std::vector<int> rank_;  // rank_above(tau, n) for n = 0..n_
    std::size_t n_ = 0;
    std::size_t step_ = 1;
    std::vector<int> full_cnt_, left_cnt_;
    std::vector<double> full_sum_, left_sum_;
    double full_total_ = 0.0;
    int left_n_ = 0;
    double left_total_ = 0.0;
};

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(std::span<const double> columns, std::size_t n, std::size_t d,
                const std::vector<std::vector<int>>& order, double tau, const GBTConfig& cfg)
        : columns_(columns), n_(n), d_(d), order_(order), tau_(tau), cfg_(cfg),
          mark_(n, 0), local_pos_(n, 0) {}

    RegressionTree build(std::span<const double> residuals, std::vector<int> members) {
        residuals_ = residuals;
        if (cfg_.criterion == SplitCriterion::subgradient) {
            gradient_.resize(n_);
            simd::pinball_subgradient(residuals, tau_, gradient_);
        }
        RegressionTree tree;
        grow(tree, std::move(members), 0);
        return tree;
    }

private:
    double x(std::size_t row, std::size_t f) const { return columns_[f * n_ + row]; }

    int grow(RegressionTree& tree, std::vector<int> members, int depth) {
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        SplitChoice split;
        const std::size_t m = members.size();
        if (depth < cfg_.max_depth && m >= 2 * static_cast<std::size_t>(cfg_.min_leaf))
            split = cfg_.criterion == SplitCriterion::pinball ? best_pinball_split(members)
                                                              : best_gradient_split(members);

        if (split.feature < 0) {
            scratch_.clear();
            for (int i : members) scratch_.push_back(residuals_[static_cast<std::size_t>(i)]);
            tree.nodes[static_cast<std::size_t>(index)].value =
                select_order_statistic(scratch_, rank_above(tau_, scratch_.size()));
            return index;
        }

        std::vector<int> left, right;
        left.reserve(m);
        right.reserve(m);
        const auto f = static_cast<std::size_t>(split.feature);
        for (int i : members)
            (x(static_cast<std::size_t>(i), f) <= split.threshold ? left : right).push_back(i);
        members.clear();
        members.shrink_to_fit();

        const int l = grow(tree, std::move(left), depth + 1);
        const int r = grow(tree, std::move(right), depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = r;
        return index;
    }

    // Members of the current node in ascending order of feature f.
    void ordered_members(std::size_t f, std::uint32_t stamp, std::vector<int>& out) const {
        out.clear();
        for (int i : order_[f])
            if (mark_[static_cast<std::size_t>(i)] == stamp) out.push_back(i);
    }

    double split_threshold(double a, double b) const {
        const double mid = a + 0.5 * (b - a);
        return mid < b ? mid : a;
    }

    SplitChoice best_pinball_split(const std::vector<int>& members) {
        const std::size_t m = members.size();
        const std::uint32_t stamp = ++stamp_;
        for (int i : members) mark_[static_cast<std::size_t>(i)] = stamp;

        // Node-local rank positions of the residuals.
        by_residual_.assign(members.begin(), members.end());
        std::sort(by_residual_.begin(), by_residual_.end(), [&](int a, int b) {
            const double ra = residuals_[static_cast<std::size_t>(a)];
            const double rb = residuals_[static_cast<std::size_t>(b)];
            return ra < rb || (ra == rb && a < b);
        });
        sorted_values_.resize(m);
        for (std::size_t p = 0; p < m; ++p) {
            const auto i = static_cast<std::size_t>(by_residual_[p]);
            local_pos_[i] = p;
            sorted_values_[p] = residuals_[i];
        }

        fenwick_.build(sorted_values_, tau_);
        const double parent_loss = fenwick_.loss_full();
        const double min_gain = 1e-12 * std::max(1.0, parent_loss);
        const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_leaf);

        SplitChoice best;
        for (std::size_t f = 0; f < d_; ++f) {
            ordered_members(f, stamp, ordered_);
            fenwick_.reset_left();
            for (std::size_t j = 0; j + 1 < m; ++j) {
                const auto i = static_cast<std::size_t>(ordered_[j]);
                fenwick_.move_left(local_pos_[i]);
                const std::size_t nl = j + 1;
                if (nl < min_leaf || m - nl < min_leaf) continue;
                const double a = x(i, f);
                const double b = x(static_cast<std::size_t>(ordered_[j + 1]), f);
                if (!(a < b)) continue;
                const double loss = fenwick_.loss_left() + fenwick_.loss_right();
                const double gain = parent_loss - loss;
                if (gain > min_gain && gain > best.gain) {
                    best.feature = static_cast<int>(f);
                    best.threshold = split_threshold(a, b);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    SplitChoice best_gradient_split(const std::vector<int>& members) {
        const std::size_t m = members.size();
        const std::uint32_t stamp = ++stamp_;
        double total = 0.0;
        for (int i : members) {
            mark_[static_cast<std::size_t>(i)] = stamp;
            total += gradient_[static_cast<std::size_t>(i)];
        }
        const double md = static_cast<double>(m);
        const double parent = total * total / md;
        const std::size_t min_leaf = static_cast<std::size_t>(cfg_.min_leaf);

        SplitChoice best;
        for (std::size_t f = 0; f < d_; ++f) {
            ordered_members(f, stamp, ordered_);
            double gl = 0.0;
            for (std::size_t j = 0; j + 1 < m; ++j) {
                const auto i = static_cast<std::size_t>(ordered_[j]);
                gl += gradient_[i];
                const std::size_t nl = j + 1;
                if (nl < min_leaf || m - nl < min_leaf) continue;
                const double a = x(i, f);
                const double b = x(static_cast<std::size_t>(ordered_[j + 1]), f);
                if (!(a < b)) continue;
                const double gr = total - gl;
                const double gain = gl * gl / static_cast<double>(nl) +
                                    gr * gr / static_cast<double>(m - nl) - parent;
                if (gain > 1e-12 && gain > best.gain) {
                    best.feature = static_cast<int>(f);
                    best.threshold = split_threshold(a, b);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    std::span<const double> columns_;
    std::size_t n_;
    std::size_t d_;
    const std::vector<std::vector<int>>& order_;
    double tau_;
    const GBTConfig& cfg_;

    std::span<const double> residuals_;
    std::vector<double> gradient_;
    std::vector<std::uint32_t> mark_;
    std::uint32_t stamp_ = 0;
    std::vector<std::size_t> local_pos_;
    std::vector<int> by_residual_;
    std::vector<int> ordered_;
    std::vector<double> sorted_values_;
    std::vector<double> scratch_;
    SplitFenwick fenwick_;
};

std::vector<int> sample_rows(std::size_t n, const GBTConfig& cfg, int tree_index) {
    std::vector<int> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    if (cfg.subsample >= 1.0) return rows;
    const std::size_t floor_rows = std::min(n, 2 * static_cast<std::size_t>(cfg.min_leaf));
    const auto k = std::max(floor_rows, static_cast<std::size_t>(std::llround(cfg.subsample * static_cast<double>(n))));
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(tree_index));
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(rows[i], rows[j]);
    }
    rows.resize(k);
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

FittedQuantileModel fit_quantile_gbt(std::span<const double> rows, std::size_t feature_count,
                                     std::span<const double> targets, QuantileLevel tau,
                                     const GBTConfig& cfg) {
    cfg.validate();
    const std::size_t n = targets.size();
    const std::size_t d = feature_count;
    if (d == 0 || rows.size() != n * d)
        throw DimensionError("feature block is not n x feature_count");
    if (n < 2 * static_cast<std::size_t>(cfg.min_leaf) || n == 0)
        throw InsufficientDataError("quantile model needs at least " +
                                    std::to_string(2 * cfg.min_leaf) + " rows, got " +
                                    std::to_string(n));
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(targets[i])) throw NumericError(i, "training target");

    const double t = tau.value();
    const double base = empirical_quantile(targets, t);

    std::vector<double> columns(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < d; ++f) columns[f * n + i] = rows[i * d + f];

    std::vector<std::vector<int>> order(d, std::vector<int>(n));
    for (std::size_t f = 0; f < d; ++f) {
        auto& o = order[f];
        std::iota(o.begin(), o.end(), 0);
        const double* col = columns.data() + f * n;
        std::stable_sort(o.begin(), o.end(), [col](int a, int b) { return col[a] < col[b]; });
    }

    std::vector<double> pred(n, base);
    std::vector<double> residuals(n);
    std::vector<double> tree_out(n);
    std::vector<RegressionTree> trees;
    trees.reserve(static_cast<std::size_t>(cfg.n_trees));

    TreeBuilder builder(columns, n, d, order, t, cfg);
    for (int m = 0; m < cfg.n_trees; ++m) {
        simd::sub(targets, pred, residuals);
        RegressionTree tree = builder.build(residuals, sample_rows(n, cfg, m));
        for (std::size_t i = 0; i < n; ++i) tree_out[i] = tree.predict(rows.data() + i * d);
        simd::axpy(cfg.shrinkage, tree_out, pred);
        trees.push_back(std::move(tree));
    }
    return FittedQuantileModel(tau, base, cfg.shrinkage, d, std::move(trees));
}

FittedQuantileModel fit_quantile_gbt(const FeatureMatrix& X, std::size_t begin, std::size_t end,
                                     QuantileLevel tau, const GBTConfig& cfg) {
    const auto rows = X.dense(begin, end);
    const std::span<const double> targets(X.targets().data() + begin, end - begin);
    return fit_quantile_gbt(rows, X.feature_count(), targets, tau, cfg);
}

QuantilePair fit_quantile_pair(std::span<const double> rows, std::size_t feature_count,
                               std::span<const double> targets, double alpha,
                               const GBTConfig& cfg) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    return {fit_quantile_gbt(rows, feature_count, targets, QuantileLevel(alpha / 2.0), cfg),
            fit_quantile_gbt(rows, feature_count, targets, QuantileLevel(1.0 - alpha / 2.0), cfg)};
}

QuantilePair fit_quantile_pair(const FeatureMatrix& X, std::size_t begin, std::size_t end,
                               double alpha, const GBTConfig& cfg) {
    const auto rows = X.dense(begin, end);
    const std::span<const double> targets(X.targets().data() + begin, end - begin);
    return fit_quantile_pair(rows, X.feature_count(), targets, alpha, cfg);
}

QuantileBand predict_band(const QuantilePair& pair, std::span<const double> x) {
    const double lo = pair.lower.predict(x);
    const double hi = pair.upper.predict(x);
    if (hi < lo) return {hi, lo, true};
    return {lo, hi, false};
}

QuantileBand predict_band(const QuantilePair& pair, const FeatureRow& row) {
    const auto a = row.as_array();
    return predict_band(pair, std::span<const double>(a));
}

}  // namespace tempconf
