#pragma once

#include "tempconf/benchmarks.hpp"
#include "tempconf/conformal.hpp"
#include "tempconf/data.hpp"
#include "tempconf/quantile_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tempconf {

// How the window quantile C_window and the online state C_adapt combine into C_t.
enum class ThresholdMode {
    additive,     // C_window + C_adapt
    online_only,  // C_adapt alone on the raw quantile band
    window_only,  // C_window alone, no online update
};

// Sign of the window scores fed to the threshold. `outside_positive` scores
// q_lo - r and r - q_hi (positive when r falls outside the band), so the window
// quantile widens the band only as far as the window's misses require.
// `inside_positive` uses r - q_lo and q_hi - r exactly as nonconformity_scores.
enum class ScoreOrientation { outside_positive, inside_positive };

enum class QrMode {
    paper,   // fit once on every feature row (uses future data)
    causal,  // fit on the first qr_causal_fraction of rows, predict the rest
};

struct BacktestConfig {
    ModelId model = ModelId::tcp;
    double alpha = 0.05;
    std::size_t window = 252;
    double gamma0 = 0.01;
    double lambda = 0.01;
    double beta = 0.75;
    double kappa = 0.0;
    std::size_t refit_every = 1;
    GBTConfig gbt;
    ThresholdMode threshold_mode = ThresholdMode::additive;
    ThresholdMethod threshold_method = ThresholdMethod::empirical;
    ScoreOrientation score_orientation = ScoreOrientation::outside_positive;
    QrMode qr_mode = QrMode::paper;
    double qr_causal_fraction = 0.3;
    bool garch_constant_mean = false;
    std::size_t garch_refit_every = 0;  // 0 = fit once on the warm-up window
    // Continue from a saved online state (C, t and step-size parameters) instead
    // of C = 0, t = 0. Its alpha must equal `alpha`.
    std::optional<ConformalState> resume_state;

    void validate() const;
    ConformalState initial_state() const;
};

struct BacktestRecord {
    std::int64_t time_index = 0;
    Date date{};
    double r = 0.0;
    PredictionInterval interval;
    bool covered = false;
    double threshold = 0.0;  // C_t used for the interval (TCP)
    double gamma = 0.0;      // step size applied after observing r (TCP)
    bool degenerate = false;
    bool crossed = false;
};

struct BacktestReport {
    ModelId model = ModelId::tcp;
    std::vector<BacktestRecord> records;
    double empirical_coverage = 0.0;
    double avg_width = 0.0;
    std::size_t n_predictions = 0;
    std::size_t degenerate_count = 0;
    std::size_t crossing_count = 0;
    std::int64_t first_index = -1;  // time index of the first issued interval
    std::optional<GarchFit> garch;  // last fitted parameters (GARCH only)
    std::optional<ConformalState> final_state;  // TCP only
};

// Throws EmptyInputError on no records.
double empirical_coverage(std::span<const BacktestRecord> records);
double avg_interval_width(std::span<const BacktestRecord> records);

// Fills the aggregate fields from `records`.
void summarize(BacktestReport& report);

// First time index at which run_tcp issues an interval: window + 26.
std::size_t tcp_first_index(std::size_t window) noexcept;

// Sequential TCP: refit the quantile pair on the trailing window every
// refit_every steps, score the window, form the interval for the next return
// before observing it, then apply the online threshold update.
BacktestReport run_tcp(const ReturnSeries& series, const BacktestConfig& cfg);

// QR / GARCH / HIST one-step-ahead intervals (model from cfg.model).
BacktestReport run_benchmark(const ReturnSeries& series, const BacktestConfig& cfg);

// Any model, including TCP.
BacktestReport run_model(const ReturnSeries& series, const BacktestConfig& cfg);

struct SweepCell {
    std::size_t window = 0;
    double gamma0 = 0.0;
    std::optional<double> coverage;
    std::optional<double> width;
    std::size_t n_predictions = 0;
    std::string error;  // non-empty when the cell failed

    bool ok() const noexcept { return error.empty(); }
};

struct SweepResult {
    std::vector<SweepCell> cells;  // window-major, gamma0-minor
    std::size_t succeeded() const noexcept;
};

inline const std::vector<std::size_t> kDefaultSweepWindows{100, 252, 500};
inline const std::vector<double> kDefaultSweepGamma0{0.005, 0.01, 0.05};

// One run_tcp per (window, gamma0). Cells run on up to `threads` workers (0 =
// hardware concurrency); each cell's GBT seed is derive_seed(master_seed, cell).
// A failing cell records its error and the sweep continues.
SweepResult sensitivity_sweep(const ReturnSeries& series, std::span<const std::size_t> windows,
                              std::span<const double> gamma0s, const BacktestConfig& cfg,
                              std::uint64_t master_seed, unsigned threads = 0);

}  // namespace tempconf
