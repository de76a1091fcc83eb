#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tempconf {

using Date = std::chrono::year_month_day;

// Parses YYYY-MM-DD; throws ParseError(line) when malformed.
Date parse_iso_date(std::string_view text, std::size_t line = 0);
std::string format_iso_date(Date d);

// Consecutive weekdays starting at `first` (weekends skipped).
std::vector<Date> business_days(Date first, std::size_t count);

enum class ReturnUnits { percent, log };

// Strictly increasing dates, positive prices, at least two observations.
class PriceSeries {
public:
    PriceSeries(std::vector<Date> dates, std::vector<double> prices);

    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& prices() const noexcept { return prices_; }
    std::size_t size() const noexcept { return prices_.size(); }

private:
    std::vector<Date> dates_;
    std::vector<double> prices_;
};

// Log-returns r_t = ln(P_t / P_{t-1}), dated at the later price, optionally x100.
class ReturnSeries {
public:
    ReturnSeries(std::vector<Date> dates, std::vector<double> values, ReturnUnits units);

    // Dated with synthetic business days from 2000-01-03.
    static ReturnSeries from_values(std::vector<double> values,
                                    ReturnUnits units = ReturnUnits::percent);

    const std::vector<Date>& dates() const noexcept { return dates_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    ReturnUnits units() const noexcept { return units_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    // First `n` observations.
    ReturnSeries head(std::size_t n) const;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
    ReturnUnits units_;
};

struct CsvFormat {
    char delimiter = ',';
    std::string date_column = "date";
    std::string price_column = "price";
};

struct RejectedRow {
    std::size_t line;
    std::string reason;
};

struct LoadedPrices {
    PriceSeries series;
    std::vector<RejectedRow> rejected;
};

// Reads a header + (date, price) CSV. Rows with a missing or non-positive price are
// skipped and listed in `rejected`; structural problems throw ParseError naming the
// line. Duplicate or decreasing dates throw TimestampOrderError.
LoadedPrices load_prices(std::istream& in, const CsvFormat& format = {});
LoadedPrices load_prices_file(const std::string& path, const CsvFormat& format = {});

// Writes `line,reason` per rejected row.
void write_rejections(std::ostream& out, std::span<const RejectedRow> rejected);

ReturnSeries log_returns(const PriceSeries& prices, ReturnUnits units = ReturnUnits::percent);

// Inverse of log_returns: base * exp(cumsum), dated one step before the first return.
PriceSeries prices_from_returns(const ReturnSeries& returns, double base = 100.0);

// sigma_t = sqrt(mean over k=1..window of (r_{t-k} - mean)^2) for t = window .. n-1.
// Element j of the result is sigma at t = window + j. Population divisor.
std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t window = 20);

inline constexpr std::size_t kLagCount = 5;
inline constexpr std::size_t kVolWindow = 20;
inline constexpr std::size_t kFeatureCount = kLagCount + 3;
// First time index with a complete feature row.
inline constexpr std::size_t kFeatureStart = kLagCount + kVolWindow;

struct FeatureRow {
    std::array<double, kLagCount> lags{};  // r_{t-1}, ..., r_{t-5}
    double rolling_vol = 0.0;
    double sq_lag = 0.0;
    double sign_lag = 0.0;

    std::array<double, kFeatureCount> as_array() const noexcept;
};

// Row i describes time step start_index + i and predicts targets[i] = r at that step
// from information strictly before it.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::vector<FeatureRow> rows, std::vector<double> targets,
                  std::size_t start_index);

    const std::vector<FeatureRow>& rows() const noexcept { return rows_; }
    const std::vector<double>& targets() const noexcept { return targets_; }
    std::size_t start_index() const noexcept { return start_index_; }
    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t feature_count() const noexcept { return kFeatureCount; }

    // Row-major n x kFeatureCount block of rows [begin, end).
    std::span<const double> dense(std::size_t begin, std::size_t end) const;
    std::span<const double> dense_row(std::size_t i) const { return dense(i, i + 1); }

private:
    std::vector<FeatureRow> rows_;
    std::vector<double> targets_;
    std::vector<double> dense_;
    std::size_t start_index_ = kFeatureStart;
};

FeatureMatrix build_features(std::span<const double> returns);
inline FeatureMatrix build_features(const ReturnSeries& r) { return build_features(r.span()); }

}  // namespace tempconf
