#include "tempconf/backtest.hpp"

#include "tempconf/random.hpp"
#include "tempconf/simd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace tempconf {

void BacktestConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    if (window == 0) throw PreconditionError("window must be positive");
    if (refit_every == 0) throw PreconditionError("refit_every must be positive");
    if (!(qr_causal_fraction > 0.0 && qr_causal_fraction < 1.0))
        throw PreconditionError("causal QR training fraction must lie in (0, 1)");
    gbt.validate();
    if (resume_state && resume_state->alpha != alpha)
        throw PreconditionError("resumed state alpha differs from the configured alpha");
    initial_state().validate();
}

ConformalState BacktestConfig::initial_state() const {
    if (resume_state) return *resume_state;
    ConformalState s;
    s.alpha = alpha;
    s.gamma0 = gamma0;
    s.lambda = lambda;
    s.beta = beta;
    s.kappa = kappa;
    return s;
}

double empirical_coverage(std::span<const BacktestRecord> records) {
    if (records.empty()) throw EmptyInputError("no backtest records");
    std::size_t covered = 0;
    for (const auto& rec : records) covered += rec.covered ? 1 : 0;
    return static_cast<double>(covered) / static_cast<double>(records.size());
}

double avg_interval_width(std::span<const BacktestRecord> records) {
    if (records.empty()) throw EmptyInputError("no backtest records");
    std::vector<double> widths(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) widths[i] = records[i].interval.width();
    return simd::sum(widths) / static_cast<double>(records.size());
}

void summarize(BacktestReport& report) {
    report.n_predictions = report.records.size();
    report.degenerate_count = 0;
    report.crossing_count = 0;
    for (const auto& rec : report.records) {
        report.degenerate_count += rec.degenerate ? 1 : 0;
        report.crossing_count += rec.crossed ? 1 : 0;
    }
    report.first_index = report.records.empty() ? -1 : report.records.front().time_index;
    if (report.records.empty()) {
        report.empirical_coverage = 0.0;
        report.avg_width = 0.0;
        return;
    }
    report.empirical_coverage = empirical_coverage(report.records);
    report.avg_width = avg_interval_width(report.records);
}

std::size_t tcp_first_index(std::size_t window) noexcept { return window + kFeatureStart + 1; }

namespace {

BacktestRecord make_record(const ReturnSeries& series, std::size_t t,
                           const PredictionInterval& iv) {
    BacktestRecord rec;
    rec.time_index = static_cast<std::int64_t>(t);
    rec.date = series.dates()[t];
    rec.r = series[t];
    rec.interval = iv;
    rec.interval.time_index = rec.time_index;
    rec.covered = iv.covers(rec.r);
    return rec;
}

double window_threshold(const QuantilePair& pair, const FeatureMatrix& X, std::size_t begin,
                        std::size_t end, const BacktestConfig& cfg, std::vector<double>& lo,
                        std::vector<double>& hi) {
    const std::size_t n = end - begin;
    lo.resize(n);
    hi.resize(n);
    const auto rows = X.dense(begin, end);
    pair.lower.predict_rows(rows, lo);
    pair.upper.predict_rows(rows, hi);
    for (std::size_t i = 0; i < n; ++i)
        if (hi[i] < lo[i]) std::swap(lo[i], hi[i]);
    const std::span<const double> targets(X.targets().data() + begin, n);
    ScoreSet scores = cfg.score_orientation == ScoreOrientation::inside_positive
                          ? nonconformity_scores(targets, lo, hi)
                          : [&] {
                                auto s = nonconformity_scores(targets, lo, hi).values();
                                for (double& v : s) v = -v;
                                return ScoreSet(std::move(s));
                            }();
    return conformal_threshold(scores, cfg.alpha, cfg.threshold_method);
}

void require_length(const ReturnSeries& series, std::size_t needed, const char* what) {
    if (series.size() < needed)
        throw InsufficientDataError(std::string(what) + " needs at least " +
                                    std::to_string(needed) + " returns, got " +
                                    std::to_string(series.size()));
}

}  // namespace

BacktestReport run_tcp(const ReturnSeries& series, const BacktestConfig& cfg) {
    cfg.validate();
    const std::size_t w = cfg.window;
    const std::size_t first = tcp_first_index(w);
    require_length(series, first + 1, "TCP backtest");

    const FeatureMatrix X = build_features(series);
    const std::size_t start = X.start_index();

    BacktestReport report;
    report.model = ModelId::tcp;
    report.records.reserve(series.size() - first);

    ConformalState state = cfg.initial_state();
    std::optional<QuantilePair> pair;
    std::vector<double> lo, hi;

    for (std::size_t t = first; t < series.size(); ++t) {
        const std::size_t row = t - start;  // feature row predicting r_t
        const std::size_t begin = row - w;
        if ((t - first) % cfg.refit_every == 0) {
            try {
                pair.emplace(fit_quantile_pair(X, begin, row, cfg.alpha, cfg.gbt));
            } catch (const Error& e) {
                throw ModelError("TCP refit at t=" + std::to_string(t) + ": " + e.what());
            }
        }

        const double c_window = cfg.threshold_mode == ThresholdMode::online_only
                                    ? 0.0
                                    : window_threshold(*pair, X, begin, row, cfg, lo, hi);
        const double c_adapt =
            cfg.threshold_mode == ThresholdMode::window_only ? 0.0 : state.threshold;
        const double c = c_window + c_adapt;

        const QuantileBand band = predict_band(*pair, X.dense_row(row));
        const FormedInterval formed =
            form_interval(band.lower, band.upper, c, static_cast<std::int64_t>(t), ModelId::tcp);

        BacktestRecord rec = make_record(series, t, formed.interval);
        rec.threshold = c;
        rec.degenerate = formed.degenerate;
        rec.crossed = band.crossed;

        if (cfg.threshold_mode != ThresholdMode::window_only) {
            const UpdateStep step = adaptive_update(state, rec.r, rec.interval);
            rec.gamma = step.gamma;
            state = step.state;
        }
        report.records.push_back(rec);
    }
    report.final_state = state;
    summarize(report);
    return report;
}

namespace {

BacktestReport run_hist(const ReturnSeries& series, const BacktestConfig& cfg) {
    require_length(series, cfg.window + 1, "historical simulation");
    BacktestReport report;
    report.model = ModelId::hist;
    HistWindow window(cfg.window);
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (const auto iv = hist_sim_interval(window, cfg.alpha))
            report.records.push_back(make_record(series, t, *iv));
        window.push(series[t]);
    }
    summarize(report);
    return report;
}

// Conditional variance for the step after `r`, starting from the sample variance.
double filtered_variance(const GarchFit& fit, std::span<const double> r) {
    double ss = 0.0;
    for (double v : r) ss += (v - fit.mean) * (v - fit.mean);
    double var = ss / static_cast<double>(r.size() - 1);
    if (!(var > 0.0)) var = fit.params.unconditional_variance();
    for (double v : r) var = garch_recursion(fit.params, v - fit.mean, var);
    return var;
}

BacktestReport run_garch(const ReturnSeries& series, const BacktestConfig& cfg) {
    const std::size_t w = cfg.window;
    require_length(series, w + 1, "GARCH benchmark");
    const GarchFitOptions options{cfg.garch_constant_mean};

    auto fit_at = [&](std::size_t t) {
        try {
            return fit_garch(series.span().subspan(t - w, w), options);
        } catch (const Error& e) {
            throw ModelError("GARCH fit at t=" + std::to_string(t) + ": " + e.what());
        }
    };

    BacktestReport report;
    report.model = ModelId::garch;
    GarchFit fit = fit_at(w);
    double var = filtered_variance(fit, series.span().subspan(0, w));
    for (std::size_t t = w; t < series.size(); ++t) {
        if (cfg.garch_refit_every > 0 && t > w && (t - w) % cfg.garch_refit_every == 0) {
            fit = fit_at(t);
            var = filtered_variance(fit, series.span().subspan(t - w, w));
        }
        report.records.push_back(make_record(series, t, garch_interval(var, cfg.alpha, fit.mean)));
        var = garch_recursion(fit.params, series[t] - fit.mean, var);
    }
    report.garch = fit;
    summarize(report);
    return report;
}

BacktestReport run_qr(const ReturnSeries& series, const BacktestConfig& cfg) {
    require_length(series, kFeatureStart + 1, "quantile regression benchmark");
    const FeatureMatrix X = build_features(series);
    const std::size_t start = X.start_index();

    std::size_t train_end = X.size();
    std::size_t predict_begin = 0;
    if (cfg.qr_mode == QrMode::causal) {
        train_end = static_cast<std::size_t>(
            std::floor(cfg.qr_causal_fraction * static_cast<double>(X.size())));
        predict_begin = train_end;
        if (predict_begin >= X.size())
            throw InsufficientDataError("causal QR leaves no rows to predict");
    }

    QuantilePair pair = [&] {
        try {
            return fit_quantile_pair(X, 0, train_end, cfg.alpha, cfg.gbt);
        } catch (const Error& e) {
            throw ModelError("QR fit at t=" + std::to_string(start + train_end) + ": " + e.what());
        }
    }();

    BacktestReport report;
    report.model = ModelId::qr;
    for (std::size_t row = predict_begin; row < X.size(); ++row) {
        const QrPrediction p = static_qr_predict(pair, X.dense_row(row));
        BacktestRecord rec = make_record(series, start + row, p.interval);
        rec.crossed = p.crossed;
        report.records.push_back(rec);
    }
    summarize(report);
    return report;
}

}  // namespace

BacktestReport run_benchmark(const ReturnSeries& series, const BacktestConfig& cfg) {
    cfg.validate();
    switch (cfg.model) {
        case ModelId::hist: return run_hist(series, cfg);
        case ModelId::garch: return run_garch(series, cfg);
        case ModelId::qr: return run_qr(series, cfg);
        case ModelId::tcp: break;
    }
    throw PreconditionError("run_benchmark does not handle TCP; use run_tcp");
}

BacktestReport run_model(const ReturnSeries& series, const BacktestConfig& cfg) {
    return cfg.model == ModelId::tcp ? run_tcp(series, cfg) : run_benchmark(series, cfg);
}

std::size_t SweepResult::succeeded() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.ok(); }));
}

SweepResult sensitivity_sweep(const ReturnSeries& series, std::span<const std::size_t> windows,
                              std::span<const double> gamma0s, const BacktestConfig& cfg,
                              std::uint64_t master_seed, unsigned threads) {
    SweepResult result;
    for (std::size_t w : windows)
        for (double g : gamma0s) {
            SweepCell cell;
            cell.window = w;
            cell.gamma0 = g;
            result.cells.push_back(cell);
        }

    auto run_cell = [&](std::size_t index) {
        SweepCell& cell = result.cells[index];
        BacktestConfig c = cfg;
        c.model = ModelId::tcp;
        c.window = cell.window;
        c.gamma0 = cell.gamma0;
        c.gbt.seed = derive_seed(master_seed, index);
        try {
            const BacktestReport report = run_tcp(series, c);
            cell.coverage = report.empirical_coverage;
            cell.width = report.avg_width;
            cell.n_predictions = report.n_predictions;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, result.cells.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < result.cells.size(); ++i) run_cell(i);
        return result;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned k = 0; k < threads; ++k)
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < result.cells.size(); i = next++) run_cell(i);
        });
    workers.clear();
    return result;
}

}  // namespace tempconf
