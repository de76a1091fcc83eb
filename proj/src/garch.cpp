#include "tempconf/benchmarks.hpp"
#include "tempconf/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tempconf {

void GarchParams::validate() const {
    if (!(omega > 0.0)) throw PreconditionError("GARCH omega must be positive");
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw PreconditionError("GARCH alpha and beta must be non-negative");
    if (!(alpha + beta < 1.0)) throw PreconditionError("GARCH alpha + beta must be below 1");
}

double garch_recursion(const GarchParams& p, double r_prev, double var_prev) noexcept {
    return p.omega + p.alpha * r_prev * r_prev + p.beta * var_prev;
}

double garch_loglik(const GarchParams& p, std::span<const double> r, double mean) {
    p.validate();
    const std::size_t n = r.size();
    if (n < 10) throw InsufficientDataError("GARCH likelihood needs at least 10 observations");

    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    double var = ss / static_cast<double>(n - 1);
    if (!(var > 0.0)) var = p.unconditional_variance();

    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = r[t] - mean;
        if (!(var > 0.0) || !std::isfinite(var)) throw NumericError(t, "conditional variance");
        ll += -half_log_2pi - 0.5 * std::log(var) - 0.5 * e * e / var;
        if (!std::isfinite(ll)) throw NumericError(t, "log-likelihood");
        var = garch_recursion(p, e, var);
    }
    return ll;
}

namespace {

using Point = std::array<double, 3>;

constexpr double kMaxPersistence = 0.9999;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

GarchParams to_params(const Point& theta) {
    const double s = kMaxPersistence * logistic(theta[1]);
    const double share = logistic(theta[2]);
    return {std::exp(theta[0]), s * share, s * (1.0 - share)};
}

Point to_theta(double omega, double persistence, double alpha_share) {
    return {std::log(omega), logit(persistence / kMaxPersistence), logit(alpha_share)};
}

struct Objective {
    std::span<const double> r;
    double mean;

    // Negative mean log-likelihood; +inf where the model is not evaluable.
    double operator()(const Point& theta) const {
        const GarchParams p = to_params(theta);
        if (!(p.omega > 0.0) || !std::isfinite(p.omega) || !(p.alpha + p.beta < 1.0))
            return std::numeric_limits<double>::infinity();
        try {
            return -garch_loglik(p, r, mean) / static_cast<double>(r.size());
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

struct NelderMeadResult {
    Point x;
    double f;
};

NelderMeadResult nelder_mead(const Objective& f, Point start, double step, int max_evals) {
    std::array<Point, 4> simplex;
    std::array<double, 4> values;
    simplex[0] = start;
    for (std::size_t i = 0; i < 3; ++i) {
        simplex[i + 1] = start;
        simplex[i + 1][i] += step;
    }
    int evals = 0;
    for (std::size_t i = 0; i < 4; ++i) values[i] = f(simplex[i]), ++evals;

    std::array<std::size_t, 4> idx{0, 1, 2, 3};
    while (evals < max_evals) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b];
        });
        const std::size_t best = idx[0], worst = idx[3], second = idx[2];

        double spread = std::fabs(values[worst] - values[best]);
        double size = 0.0;
        for (std::size_t i = 1; i < 4; ++i)
            for (std::size_t k = 0; k < 3; ++k)
                size = std::max(size, std::fabs(simplex[idx[i]][k] - simplex[best][k]));
        if (std::isfinite(values[worst]) && spread < 1e-12 && size < 1e-7) break;

        Point centroid{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 3; ++k) centroid[k] += simplex[idx[i]][k] / 3.0;

        auto along = [&](double coef) {
            Point p;
            for (std::size_t k = 0; k < 3; ++k)
                p[k] = centroid[k] + coef * (simplex[worst][k] - centroid[k]);
            return p;
        };

        const Point reflected = along(-1.0);
        const double fr = f(reflected);
        ++evals;
        if (fr < values[best]) {
            const Point expanded = along(-2.0);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = reflected;
            values[worst] = fr;
            continue;
        }
        const bool outside = fr < values[worst];
        const Point contracted = along(outside ? -0.5 : 0.5);
        const double fc = f(contracted);
        ++evals;
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = contracted;
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 1; i < 4; ++i) {
            const std::size_t j = idx[i];
            for (std::size_t k = 0; k < 3; ++k)
                simplex[j][k] = simplex[best][k] + 0.5 * (simplex[j][k] - simplex[best][k]);
            values[j] = f(simplex[j]);
            ++evals;
        }
    }
    const auto it = std::min_element(values.begin(), values.end());
    return {simplex[static_cast<std::size_t>(it - values.begin())], *it};
}

}  // namespace

GarchFit fit_garch(std::span<const double> r, const GarchFitOptions& options) {
    if (r.size() < 100)
        throw InsufficientDataError("GARCH fit needs at least 100 observations, got " +
                                    std::to_string(r.size()));
    double mean = 0.0;
    if (options.constant_mean) {
        for (double v : r) mean += v;
        mean /= static_cast<double>(r.size());
    }
    double var = 0.0;
    for (double v : r) var += (v - mean) * (v - mean);
    var /= static_cast<double>(r.size());

    const GarchFit degenerate{{1e-12, 0.0, 0.0}, -std::numeric_limits<double>::infinity(), mean};
    if (!(var > 0.0) || !std::isfinite(var))
        throw GarchOptimizationError("returns have zero variance; omega pinned at its lower bound",
                                     degenerate);

    // (persistence, alpha share) starting grid; omega matches the sample variance.
    static constexpr std::array<std::array<double, 2>, 8> kStarts{{
        {0.90, 0.10}, {0.95, 0.05}, {0.98, 0.05}, {0.80, 0.25},
        {0.50, 0.30}, {0.99, 0.03}, {0.70, 0.15}, {0.95, 0.15},
    }};

    const Objective objective{r, mean};
    GarchFit best = degenerate;
    double best_f = std::numeric_limits<double>::infinity();
    bool improved = false;
    for (const auto& [s, share] : kStarts) {
        const Point start = to_theta(var * (1.0 - s), s, share);
        const double f0 = objective(start);
        NelderMeadResult res = nelder_mead(objective, start, 0.5, options.max_evaluations);
        // One restart from the optimum guards against a collapsed simplex.
        res = nelder_mead(objective, res.x, 0.1, options.max_evaluations);
        if (std::isfinite(res.f) && res.f < f0 - 1e-12) improved = true;
        if (res.f < best_f) {
            best_f = res.f;
            best.params = to_params(res.x);
            best.loglik = -res.f * static_cast<double>(r.size());
        }
    }
    if (!improved || !std::isfinite(best_f))
        throw GarchOptimizationError("no restart improved on its starting point", best);
    return best;
}

PredictionInterval garch_interval(double variance, double alpha, double mean) {
    if (!(variance >= 0.0)) throw PreconditionError("variance must be non-negative");
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance);
    PredictionInterval iv;
    iv.lower = mean - half;
    iv.upper = mean + half;
    iv.model = ModelId::garch;
    return iv;
}

}  // namespace tempconf
