#include "tempconf/benchmarks.hpp"
#include "tempconf/order_stats.hpp"
#include "tempconf/simd/kernels.hpp"

namespace tempconf {

HistWindow::HistWindow(std::size_t window) : window_(window) {
    if (window == 0) throw PreconditionError("historical window must be positive");
}

void HistWindow::push(double r) {
    buffer_.push_back(r);
    if (buffer_.size() > window_) buffer_.pop_front();
}

double HistWindow::mean() const {
    if (buffer_.empty()) throw EmptyInputError("empty historical window");
    const auto v = values();
    return simd::sum(v) / static_cast<double>(v.size());
}

std::optional<PredictionInterval> hist_sim_interval(const HistWindow& h, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    if (!h.full()) return std::nullopt;
    std::vector<double> v = h.values();
    const std::size_t n = v.size();
    PredictionInterval iv;
    iv.model = ModelId::hist;
    iv.lower = select_order_statistic(v, rank_above(alpha / 2.0, n));
    iv.upper = select_order_statistic(v, rank_above(1.0 - alpha / 2.0, n));
    return iv;
}

QrPrediction static_qr_predict(const QuantilePair& pair, std::span<const double> x) {
    const QuantileBand band = predict_band(pair, x);
    QrPrediction out;
    out.interval.lower = band.lower;
    out.interval.upper = band.upper;
    out.interval.model = ModelId::qr;
    out.crossed = band.crossed;
    return out;
}

QrPrediction static_qr_predict(const QuantilePair& pair, const FeatureRow& row) {
    const auto a = row.as_array();
    return static_qr_predict(pair, std::span<const double>(a));
}

}  // namespace tempconf
