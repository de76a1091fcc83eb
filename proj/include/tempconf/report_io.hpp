#pragma once

// JSON and CSV export of reports, sweeps, model state and run manifests.
// Table-facing numbers are written with 4 decimals; state snapshots and fitted
// parameters keep full precision so they can be reloaded.

#include "tempconf/backtest.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tempconf::io {

using nlohmann::json;

inline constexpr std::string_view kVersion = "0.3.1";

std::string fixed4(double v);
double round4(double v);

json to_json(const ConformalState& state);
// Throws ParseError for a missing or mistyped field, PreconditionError for
// values outside the state invariants.
ConformalState state_from_json(const json& j);

json to_json(const GarchFit& fit);
json to_json(const FittedQuantileModel& model);

json summary_json(const BacktestReport& report);

// t,date,r,lower,upper,covered,C,gamma. C and gamma are left empty for models
// that do not carry them.
void write_records_csv(std::ostream& out, const BacktestReport& report);

// w,gamma0,coverage,width in grid order; failed cells carry `error` in the
// metric columns.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// Fixed-width results table: model, empirical coverage, average width, predictions.
std::string table_header();
std::string table_row(const BacktestReport& report);

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::filesystem::path& path);

std::string utc_timestamp(std::chrono::system_clock::time_point tp);

struct OutputFile {
    std::string name;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    json config = json::object();
    std::uint64_t master_seed = 0;
    std::string version{kVersion};
    std::string input_path;
    std::string input_sha256;
    std::string started;
    std::string finished;
    std::vector<OutputFile> outputs;

    json to_json() const;
};

// Writes `content` to dir/name and records its digest in `manifest`.
void write_output(const std::filesystem::path& dir, const std::string& name,
                  std::string_view content, RunManifest& manifest);

}  // namespace tempconf::io
