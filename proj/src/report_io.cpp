#include "tempconf/report_io.hpp"

#include "tempconf/errors.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tempconf::io {

std::string fixed4(double v) {
    const std::string s = fmt::format("{:.4f}", v);
    return s == "-0.0000" ? "0.0000" : s;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

json to_json(const ConformalState& s) {
    return {{"C", s.threshold}, {"t", s.t},         {"alpha", s.alpha}, {"gamma0", s.gamma0},
            {"lambda", s.lambda}, {"beta", s.beta}, {"kappa", s.kappa}};
}

namespace {

template <class T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(0, fmt::format("missing field '{}'", key));
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(0, fmt::format("field '{}' has the wrong type", key));
    }
}

}  // namespace

ConformalState state_from_json(const json& j) {
    ConformalState s;
    s.threshold = field<double>(j, "C");
    s.t = field<std::uint64_t>(j, "t");
    s.alpha = field<double>(j, "alpha");
    s.gamma0 = field<double>(j, "gamma0");
    s.lambda = field<double>(j, "lambda");
    s.beta = field<double>(j, "beta");
    s.kappa = field<double>(j, "kappa");
    s.validate();
    return s;
}

json to_json(const GarchFit& fit) {
    return {{"omega", fit.params.omega},
            {"alpha", fit.params.alpha},
            {"beta", fit.params.beta},
            {"loglik", fit.loglik}};
}

json to_json(const FittedQuantileModel& model) {
    json trees = json::array();
    for (const auto& tree : model.trees()) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf())
                nodes.push_back({{"leaf", n.value}});
            else
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right}});
        }
        trees.push_back(std::move(nodes));
    }
    return {{"tau", model.tau().value()},
            {"base", model.base_value()},
            {"shrinkage", model.shrinkage()},
            {"features", model.feature_count()},
            {"trees", std::move(trees)}};
}

json summary_json(const BacktestReport& report) {
    json j = {{"model", model_name(report.model)},
              {"n_predictions", report.n_predictions},
              {"empirical_coverage", round4(report.empirical_coverage)},
              {"avg_width", round4(report.avg_width)},
              {"degenerate_count", report.degenerate_count},
              {"crossing_count", report.crossing_count},
              {"first_index", report.first_index},
              {"manifest", "manifest.json"}};
    if (!report.records.empty()) {
        j["first_date"] = format_iso_date(report.records.front().date);
        j["last_date"] = format_iso_date(report.records.back().date);
    }
    if (report.garch) j["garch"] = to_json(*report.garch);
    if (report.final_state) j["final_state"] = to_json(*report.final_state);
    return j;
}

void write_records_csv(std::ostream& out, const BacktestReport& report) {
    const bool adaptive = report.model == ModelId::tcp;
    out << "t,date,r,lower,upper,covered,C,gamma\n";
    for (const auto& rec : report.records) {
        out << rec.time_index << ',' << format_iso_date(rec.date) << ',' << fixed4(rec.r) << ','
            << fixed4(rec.interval.lower) << ',' << fixed4(rec.interval.upper) << ','
            << (rec.covered ? 1 : 0) << ',';
        if (adaptive) out << fixed4(rec.threshold) << ',' << fixed4(rec.gamma);
        else out << ',';
        out << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "w,gamma0,coverage,width\n";
    for (const auto& cell : sweep.cells) {
        out << cell.window << ',' << fixed4(cell.gamma0) << ',';
        if (cell.ok() && cell.coverage && cell.width)
            out << fixed4(*cell.coverage) << ',' << fixed4(*cell.width);
        else
            out << "error,error";
        out << '\n';
    }
}

std::string table_header() {
    return fmt::format("{:<8}{:>20}{:>22}{:>14}", "Model", "Empirical Coverage",
                       "Avg. Interval Width", "Predictions");
}

std::string table_row(const BacktestReport& report) {
    return fmt::format("{:<8}{:>20}{:>22}{:>14}", model_name(report.model),
                       fixed4(report.empirical_coverage), fixed4(report.avg_width),
                       report.n_predictions);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
    const auto secs = std::chrono::floor<std::chrono::seconds>(tp);
    const auto day = std::chrono::floor<std::chrono::days>(secs);
    const std::chrono::hh_mm_ss hms(secs - day);
    return fmt::format("{}T{:02}:{:02}:{:02}Z", format_iso_date(std::chrono::year_month_day(day)),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

json RunManifest::to_json() const {
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"file", o.name}, {"sha256", o.sha256}});
    json j = {{"command", command},   {"version", version},   {"master_seed", master_seed},
              {"config", config},     {"started", started},   {"finished", finished},
              {"outputs", std::move(outs)}};
    if (!input_path.empty()) j["input"] = {{"path", input_path}, {"sha256", input_sha256}};
    return j;
}

void write_output(const std::filesystem::path& dir, const std::string& name,
                  std::string_view content, RunManifest& manifest) {
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + path.string());
    manifest.outputs.push_back({name, sha256_hex(content)});
}

}  // namespace tempconf::io
