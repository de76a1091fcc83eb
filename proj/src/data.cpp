#include "tempconf/data.hpp"

#include "tempconf/errors.hpp"
#include "tempconf/simd/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace tempconf {

using namespace std::chrono;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\xEF' || s.front() == '\xBB' || s.front() == '\xBF'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(delim, pos);
        out.push_back(trim(line.substr(pos, next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_weekend(Date d) {
    const weekday wd{sys_days{d}};
    return wd == Saturday || wd == Sunday;
}

const Date kSyntheticEpoch = year{2000} / January / 3;  // a Monday

}  // namespace

Date parse_iso_date(std::string_view text, std::size_t line) {
    text = trim(text);
    int y = 0;
    unsigned m = 0, d = 0;
    auto bad = [&] { return ParseError(line, "invalid ISO-8601 date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    const char* p = text.data();
    if (std::from_chars(p, p + 4, y).ptr != p + 4) throw bad();
    if (std::from_chars(p + 5, p + 7, m).ptr != p + 7) throw bad();
    if (std::from_chars(p + 8, p + 10, d).ptr != p + 10) throw bad();
    const Date date{year{y}, month{m}, day{d}};
    if (!date.ok()) throw bad();
    return date;
}

std::string format_iso_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::vector<Date> business_days(Date first, std::size_t count) {
    std::vector<Date> out;
    out.reserve(count);
    sys_days cur{first};
    while (out.size() < count) {
        if (!is_weekend(Date{cur})) out.emplace_back(cur);
        cur += days{1};
    }
    return out;
}

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> prices)
    : dates_(std::move(dates)), prices_(std::move(prices)) {
    if (dates_.size() != prices_.size())
        throw DimensionError("price series: dates and prices differ in length");
    if (prices_.size() < 2)
        throw InsufficientDataError("price series needs at least 2 observations, got " +
                                    std::to_string(prices_.size()));
    for (std::size_t i = 0; i < prices_.size(); ++i) {
        if (!(prices_[i] > 0.0) || !std::isfinite(prices_[i]))
            throw PreconditionError("price at index " + std::to_string(i) + " is not positive");
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            if (dates_[i - 1] == dates_[i])
                throw DuplicateTimestampError("duplicate timestamp " + format_iso_date(dates_[i]));
            throw TimestampOrderError("timestamps not increasing at " + format_iso_date(dates_[i]));
        }
    }
}

ReturnSeries::ReturnSeries(std::vector<Date> dates, std::vector<double> values, ReturnUnits units)
    : dates_(std::move(dates)), values_(std::move(values)), units_(units) {
    if (dates_.size() != values_.size())
        throw DimensionError("return series: dates and values differ in length");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i])) throw NumericError(i, "return is not finite");
}

ReturnSeries ReturnSeries::from_values(std::vector<double> values, ReturnUnits units) {
    // The epoch itself is reserved for the base price.
    auto dates = business_days(kSyntheticEpoch, values.size() + 1);
    dates.erase(dates.begin());
    return ReturnSeries(std::move(dates), std::move(values), units);
}

ReturnSeries ReturnSeries::head(std::size_t n) const {
    n = std::min(n, size());
    return ReturnSeries({dates_.begin(), dates_.begin() + static_cast<std::ptrdiff_t>(n)},
                        {values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)},
                        units_);
}

LoadedPrices load_prices(std::istream& in, const CsvFormat& format) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t date_col = 0, price_col = 0, width = 0;
    bool have_header = false;

    std::vector<Date> dates;
    std::vector<double> prices;
    std::vector<RejectedRow> rejected;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto fields = split(view, format.delimiter);

        if (!have_header) {
            bool found_date = false, found_price = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const std::string name = lower(fields[i]);
                if (name == lower(format.date_column)) date_col = i, found_date = true;
                if (name == lower(format.price_column)) price_col = i, found_price = true;
            }
            if (!found_date || !found_price)
                throw ParseError(line_no, "header must name columns '" + format.date_column +
                                              "' and '" + format.price_column + "'");
            width = fields.size();
            have_header = true;
            continue;
        }

        if (fields.size() != width)
            throw ParseError(line_no, "expected " + std::to_string(width) + " fields, got " +
                                          std::to_string(fields.size()));
        const Date date = parse_iso_date(fields[date_col], line_no);

        const std::string_view price_text = fields[price_col];
        if (price_text.empty()) {
            rejected.push_back({line_no, "missing price"});
            continue;
        }
        double price = 0.0;
        const auto [ptr, ec] =
            std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
        if (ec != std::errc{} || ptr != price_text.data() + price_text.size())
            throw ParseError(line_no, "invalid price '" + std::string(price_text) + "'");
        if (!std::isfinite(price) || price <= 0.0) {
            rejected.push_back({line_no, "non-positive price"});
            continue;
        }

        if (!dates.empty() && !(dates.back() < date)) {
            if (dates.back() == date)
                throw DuplicateTimestampError("line " + std::to_string(line_no) +
                                              ": duplicate timestamp " + format_iso_date(date));
            throw TimestampOrderError("line " + std::to_string(line_no) +
                                      ": timestamp earlier than previous row");
        }
        dates.push_back(date);
        prices.push_back(price);
    }

    if (!have_header) throw ParseError(line_no, "empty input, header expected");
    if (prices.size() < 2)
        throw InsufficientDataError("need at least 2 valid price rows, got " +
                                    std::to_string(prices.size()));
    return {PriceSeries(std::move(dates), std::move(prices)), std::move(rejected)};
}

LoadedPrices load_prices_file(const std::string& path, const CsvFormat& format) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    return load_prices(in, format);
}

void write_rejections(std::ostream& out, std::span<const RejectedRow> rejected) {
    for (const auto& r : rejected) out << r.line << ',' << r.reason << '\n';
}

ReturnSeries log_returns(const PriceSeries& prices, ReturnUnits units) {
    const auto& p = prices.prices();
    const double scale = units == ReturnUnits::percent ? 100.0 : 1.0;
    std::vector<double> r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = scale * std::log(p[i] / p[i - 1]);
    return ReturnSeries({prices.dates().begin() + 1, prices.dates().end()}, std::move(r), units);
}

PriceSeries prices_from_returns(const ReturnSeries& returns, double base) {
    const double scale = returns.units() == ReturnUnits::percent ? 0.01 : 1.0;
    std::vector<double> prices;
    prices.reserve(returns.size() + 1);
    prices.push_back(base);
    double cum = 0.0;
    for (double r : returns.values()) {
        cum += r * scale;
        prices.push_back(base * std::exp(cum));
    }

    std::vector<Date> dates;
    dates.reserve(prices.size());
    if (returns.size() > 0) {
        sys_days prev = sys_days{returns.dates().front()} - days{1};
        while (is_weekend(Date{prev})) prev -= days{1};
        dates.emplace_back(prev);
    } else {
        dates.push_back(kSyntheticEpoch);
    }
    dates.insert(dates.end(), returns.dates().begin(), returns.dates().end());
    return PriceSeries(std::move(dates), std::move(prices));
}

std::vector<double> rolling_volatility(std::span<const double> returns, std::size_t window) {
    if (window == 0) throw PreconditionError("rolling window must be positive");
    if (returns.size() < window)
        throw InsufficientDataError("series of length " + std::to_string(returns.size()) +
                                    " is shorter than the volatility window " +
                                    std::to_string(window));
    std::vector<double> out(returns.size() - window);
    const double inv = 1.0 / static_cast<double>(window);
    for (std::size_t t = window; t < returns.size(); ++t) {
        const auto w = returns.subspan(t - window, window);
        const double mean = simd::sum(w) * inv;
        out[t - window] = std::sqrt(simd::sum_sq_dev(w, mean) * inv);
    }
    return out;
}

std::array<double, kFeatureCount> FeatureRow::as_array() const noexcept {
    return {lags[0], lags[1], lags[2], lags[3], lags[4], rolling_vol, sq_lag, sign_lag};
}

FeatureMatrix::FeatureMatrix(std::vector<FeatureRow> rows, std::vector<double> targets,
                             std::size_t start_index)
    : rows_(std::move(rows)), targets_(std::move(targets)), start_index_(start_index) {
    if (rows_.size() != targets_.size())
        throw DimensionError("feature rows and targets differ in length");
    dense_.reserve(rows_.size() * kFeatureCount);
    for (const auto& row : rows_) {
        const auto a = row.as_array();
        dense_.insert(dense_.end(), a.begin(), a.end());
    }
}

std::span<const double> FeatureMatrix::dense(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows_.size())
        throw DimensionError("feature row range out of bounds");
    return std::span<const double>(dense_).subspan(begin * kFeatureCount,
                                                   (end - begin) * kFeatureCount);
}

FeatureMatrix build_features(std::span<const double> returns) {
    if (returns.size() < kFeatureStart + 1)
        throw InsufficientDataError("feature construction needs at least " +
                                    std::to_string(kFeatureStart + 1) + " returns, got " +
                                    std::to_string(returns.size()));
    const auto vol = rolling_volatility(returns, kVolWindow);

    std::vector<FeatureRow> rows;
    std::vector<double> targets;
    rows.reserve(returns.size() - kFeatureStart);
    targets.reserve(returns.size() - kFeatureStart);
    for (std::size_t t = kFeatureStart; t < returns.size(); ++t) {
        FeatureRow row;
        for (std::size_t k = 0; k < kLagCount; ++k) row.lags[k] = returns[t - 1 - k];
        row.rolling_vol = vol[t - kVolWindow];
        row.sq_lag = row.lags[0] * row.lags[0];
        row.sign_lag = row.lags[0] > 0.0 ? 1.0 : (row.lags[0] < 0.0 ? -1.0 : 0.0);
        rows.push_back(row);
        targets.push_back(returns[t]);
    }
    return FeatureMatrix(std::move(rows), std::move(targets), kFeatureStart);
}

}  // namespace tempconf
