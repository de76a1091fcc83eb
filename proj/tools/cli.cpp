#include "cli.hpp"

#include "tempconf/backtest.hpp"
#include "tempconf/errors.hpp"
#include "tempconf/report_io.hpp"
#include "tempconf/synth.hpp"
#include "tempconf/validation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace tempconf::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, ModelId> kModels{
    {"tcp", ModelId::tcp}, {"qr", ModelId::qr}, {"garch", ModelId::garch}, {"hist", ModelId::hist}};
const std::map<std::string, ThresholdMode> kThresholdModes{
    {"additive", ThresholdMode::additive},
    {"online_only", ThresholdMode::online_only},
    {"window_only", ThresholdMode::window_only}};
const std::map<std::string, ThresholdMethod> kThresholdMethods{
    {"empirical", ThresholdMethod::empirical}, {"finite_sample", ThresholdMethod::finite_sample}};
const std::map<std::string, ScoreOrientation> kOrientations{
    {"outside", ScoreOrientation::outside_positive}, {"inside", ScoreOrientation::inside_positive}};
const std::map<std::string, QrMode> kQrModes{{"paper", QrMode::paper}, {"causal", QrMode::causal}};
const std::map<std::string, SplitCriterion> kCriteria{
    {"pinball", SplitCriterion::pinball}, {"subgradient", SplitCriterion::subgradient}};
const std::map<std::string, ReturnUnits> kUnits{{"percent", ReturnUnits::percent},
                                                {"log", ReturnUnits::log}};

template <class Map>
std::vector<std::string> keys(const Map& m) {
    std::vector<std::string> k;
    for (const auto& [name, value] : m) k.push_back(name);
    return k;
}

template <class Map>
std::string key_of(const Map& m, const typename Map::mapped_type& v) {
    for (const auto& [name, value] : m)
        if (value == v) return name;
    return "?";
}

fs::path default_output_dir() {
    if (const char* dir = std::getenv("TEMPCONF_OUTPUT_DIR"); dir && *dir) return dir;
    return ".";
}

std::string now_utc() { return io::utc_timestamp(std::chrono::system_clock::now()); }

struct InputFlags {
    std::string path;
    std::string units = "percent";
    std::string date_column = "date";
    std::string price_column = "price";
    char delimiter = ',';
};

void add_input_flags(CLI::App* sub, InputFlags& f) {
    sub->add_option("--input", f.path, "Price CSV with a header row (date, price)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--units", f.units, "Return units")
        ->check(CLI::IsMember(keys(kUnits)))
        ->capture_default_str();
    sub->add_option("--date-column", f.date_column, "Name of the date column")
        ->capture_default_str();
    sub->add_option("--price-column", f.price_column, "Name of the price column")
        ->capture_default_str();
    sub->add_option("--delimiter", f.delimiter, "Field delimiter")->capture_default_str();
}

ReturnSeries load_input(const InputFlags& f, std::ostream& err, io::RunManifest& manifest) {
    CsvFormat format;
    format.delimiter = f.delimiter;
    format.date_column = f.date_column;
    format.price_column = f.price_column;
    const LoadedPrices loaded = load_prices_file(f.path, format);
    if (!loaded.rejected.empty()) write_rejections(err, loaded.rejected);
    manifest.input_path = f.path;
    manifest.input_sha256 = io::file_sha256(f.path);
    return log_returns(loaded.series, kUnits.at(f.units));
}

struct ModelFlags {
    BacktestConfig cfg;
    std::string threshold_mode = "additive";
    std::string threshold_method = "empirical";
    std::string orientation = "outside";
    std::string qr_mode = "paper";
    std::string criterion = "pinball";
    std::string state_in;
};

void add_model_flags(CLI::App* sub, ModelFlags& f) {
    BacktestConfig& c = f.cfg;
    sub->add_option("--alpha", c.alpha, "Miscoverage level")->capture_default_str();
    sub->add_option("--window", c.window, "Rolling window w (TCP training, Hist, GARCH fit)")
        ->capture_default_str();
    sub->add_option("--gamma0", c.gamma0, "Initial online step size")->capture_default_str();
    sub->add_option("--lambda", c.lambda, "Step-size decay rate")->capture_default_str();
    sub->add_option("--beta", c.beta, "Step-size decay exponent in (0.5, 1]")
        ->capture_default_str();
    sub->add_option("--kappa", c.kappa, "Shrink-on-cover decay strength (0 disables)")
        ->capture_default_str();
    sub->add_option("--refit-every", c.refit_every, "Refit the TCP quantile pair every k steps")
        ->capture_default_str();
    sub->add_option("--threshold-mode", f.threshold_mode,
                    "How the window quantile and the online threshold combine")
        ->check(CLI::IsMember(keys(kThresholdModes)))
        ->capture_default_str();
    sub->add_option("--threshold-method", f.threshold_method, "Window quantile rank rule")
        ->check(CLI::IsMember(keys(kThresholdMethods)))
        ->capture_default_str();
    sub->add_option("--score-orientation", f.orientation,
                    "Sign of the window scores: outside (positive on a miss) or inside")
        ->check(CLI::IsMember(keys(kOrientations)))
        ->capture_default_str();
    sub->add_option("--qr-mode", f.qr_mode,
                    "Static QR training set: paper (all rows, uses future data) or causal")
        ->check(CLI::IsMember(keys(kQrModes)))
        ->capture_default_str();
    sub->add_option("--qr-causal-fraction", c.qr_causal_fraction,
                    "Share of feature rows used to train causal QR")
        ->capture_default_str();
    sub->add_option("--garch-refit-every", c.garch_refit_every,
                    "Refit GARCH every k steps (0 = fit once)")
        ->capture_default_str();
    sub->add_flag("--garch-constant-mean", c.garch_constant_mean,
                  "Estimate a constant mean for GARCH instead of fixing it at zero");
    sub->add_option("--n-trees", c.gbt.n_trees, "Boosting rounds")->capture_default_str();
    sub->add_option("--max-depth", c.gbt.max_depth, "Tree depth")->capture_default_str();
    sub->add_option("--shrinkage", c.gbt.shrinkage, "Learning rate")->capture_default_str();
    sub->add_option("--min-leaf", c.gbt.min_leaf, "Minimum rows per leaf")->capture_default_str();
    sub->add_option("--subsample", c.gbt.subsample, "Row subsampling fraction per tree")
        ->capture_default_str();
    sub->add_option("--split-criterion", f.criterion, "Tree split criterion")
        ->check(CLI::IsMember(keys(kCriteria)))
        ->capture_default_str();
    sub->add_option("--seed", c.gbt.seed, "Master seed")->capture_default_str();
    sub->add_option("--state-in", f.state_in, "Resume TCP from a saved online state JSON")
        ->check(CLI::ExistingFile);
}

BacktestConfig resolve(const ModelFlags& f) {
    BacktestConfig c = f.cfg;
    c.threshold_mode = kThresholdModes.at(f.threshold_mode);
    c.threshold_method = kThresholdMethods.at(f.threshold_method);
    c.score_orientation = kOrientations.at(f.orientation);
    c.qr_mode = kQrModes.at(f.qr_mode);
    c.gbt.criterion = kCriteria.at(f.criterion);
    if (!f.state_in.empty()) {
        std::ifstream in(f.state_in);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ParseError(0, f.state_in + ": " + e.what());
        }
        c.resume_state = io::state_from_json(j);
    }
    try {
        c.validate();
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }
    return c;
}

json config_json(const BacktestConfig& c) {
    json j = {{"alpha", c.alpha},
              {"window", c.window},
              {"gamma0", c.gamma0},
              {"lambda", c.lambda},
              {"beta", c.beta},
              {"kappa", c.kappa},
              {"refit_every", c.refit_every},
              {"threshold_mode", key_of(kThresholdModes, c.threshold_mode)},
              {"threshold_method", key_of(kThresholdMethods, c.threshold_method)},
              {"score_orientation", key_of(kOrientations, c.score_orientation)},
              {"qr_mode", key_of(kQrModes, c.qr_mode)},
              {"qr_causal_fraction", c.qr_causal_fraction},
              {"garch_refit_every", c.garch_refit_every},
              {"garch_constant_mean", c.garch_constant_mean},
              {"gbt",
               {{"n_trees", c.gbt.n_trees},
                {"max_depth", c.gbt.max_depth},
                {"shrinkage", c.gbt.shrinkage},
                {"min_leaf", c.gbt.min_leaf},
                {"subsample", c.gbt.subsample},
                {"seed", c.gbt.seed},
                {"criterion", key_of(kCriteria, c.gbt.criterion)}}}};
    if (c.resume_state) j["resume_state"] = io::to_json(*c.resume_state);
    return j;
}

void finish_manifest(const fs::path& dir, io::RunManifest& m) {
    m.finished = now_utc();
    fs::create_directories(dir);
    std::ofstream out(dir / "manifest.json");
    if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
    out << m.to_json().dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct BacktestArgs {
    InputFlags input;
    ModelFlags model;
    std::string which = "tcp";
    std::string out_dir;
};

int cmd_backtest(const BacktestArgs& a, std::ostream& out, std::ostream& err) {
    io::RunManifest manifest;
    manifest.command = "backtest";
    manifest.started = now_utc();
    const fs::path dir = a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir);
    BacktestConfig cfg = resolve(a.model);
    const ReturnSeries series = load_input(a.input, err, manifest);

    std::vector<ModelId> models;
    if (a.which == "all")
        models = {ModelId::tcp, ModelId::qr, ModelId::garch, ModelId::hist};
    else
        models = {kModels.at(a.which)};

    json warmup = json::array();
    out << io::table_header() << '\n';
    for (ModelId id : models) {
        cfg.model = id;
        const BacktestReport report = run_model(series, cfg);
        const std::string name(key_of(kModels, id));
        std::ostringstream records;
        io::write_records_csv(records, report);
        io::write_output(dir, name + "_records.csv", records.str(), manifest);
        io::write_output(dir, name + "_summary.json", io::summary_json(report).dump(2) + "\n",
                         manifest);
        if (report.final_state)
            io::write_output(dir, name + "_state.json",
                             io::to_json(*report.final_state).dump(2) + "\n", manifest);
        json entry = {{"model", model_name(id)},
                      {"first_index", report.first_index},
                      {"warmup_returns", report.first_index < 0 ? 0 : report.first_index},
                      {"n_predictions", report.n_predictions}};
        if (!report.records.empty())
            entry["first_date"] = format_iso_date(report.records.front().date);
        warmup.push_back(std::move(entry));
        out << io::table_row(report) << '\n';
    }
    if (models.size() > 1) {
        const json doc = {{"series_length", series.size()},
                          {"models", warmup},
                          {"manifest", "manifest.json"}};
        io::write_output(dir, "warmup.json", doc.dump(2) + "\n", manifest);
    }

    manifest.config = config_json(cfg);
    manifest.config["model"] = a.which;
    manifest.config["units"] = a.input.units;
    manifest.master_seed = cfg.gbt.seed;
    finish_manifest(dir, manifest);
    return kOk;
}

struct SweepArgs {
    InputFlags input;
    ModelFlags model;
    std::vector<std::size_t> windows = kDefaultSweepWindows;
    std::vector<double> gamma0s = kDefaultSweepGamma0;
    unsigned threads = 0;
    std::string out_dir;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    io::RunManifest manifest;
    manifest.command = "sweep";
    manifest.started = now_utc();
    const fs::path dir = a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir);
    BacktestConfig cfg = resolve(a.model);
    cfg.model = ModelId::tcp;
    for (std::size_t w : a.windows)
        if (w == 0) throw UsageError("--w values must be positive");
    for (double g : a.gamma0s)
        if (!(g > 0.0)) throw UsageError("--gamma0 values must be positive");
    const ReturnSeries series = load_input(a.input, err, manifest);

    const SweepResult result =
        sensitivity_sweep(series, a.windows, a.gamma0s, cfg, cfg.gbt.seed, a.threads);
    std::ostringstream csv;
    io::write_sweep_csv(csv, result);
    io::write_output(dir, "sweep.csv", csv.str(), manifest);

    out << fmt::format("{:>6}{:>10}{:>12}{:>12}\n", "w", "gamma0", "Coverage", "Width");
    for (const auto& cell : result.cells) {
        if (cell.ok())
            out << fmt::format("{:>6}{:>10}{:>12}{:>12}\n", cell.window, io::fixed4(cell.gamma0),
                               io::fixed4(*cell.coverage), io::fixed4(*cell.width));
        else {
            out << fmt::format("{:>6}{:>10}{:>12}{:>12}\n", cell.window, io::fixed4(cell.gamma0),
                               "error", "error");
            err << fmt::format("cell w={} gamma0={}: {}\n", cell.window, io::fixed4(cell.gamma0),
                               cell.error);
        }
    }

    manifest.config = config_json(cfg);
    manifest.config["w"] = a.windows;
    manifest.config["gamma0"] = a.gamma0s;
    manifest.config["units"] = a.input.units;
    manifest.master_seed = cfg.gbt.seed;
    finish_manifest(dir, manifest);
    return result.succeeded() > 0 ? kOk : kModelError;
}

struct SimulateArgs {
    std::string generator;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double sd = 1.0;
    double omega = 0.05;
    double garch_alpha = 0.10;
    double garch_beta = 0.85;
    std::vector<std::string> segments{"2000:1", "2000:3"};
    std::string units = "percent";
    std::string output;
};

RegimeSpec parse_segments(const std::vector<std::string>& items) {
    RegimeSpec spec;
    for (const auto& item : items) {
        std::vector<std::string> parts;
        std::stringstream ss(item);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 2 || parts.size() > 3)
            throw UsageError("segment '" + item + "' is not length:vol[:mean]");
        RegimeSegment seg;
        try {
            seg.length = std::stoul(parts[0]);
            seg.volatility = std::stod(parts[1]);
            if (parts.size() == 3) seg.mean = std::stod(parts[2]);
        } catch (const std::exception&) {
            throw UsageError("segment '" + item + "' is not length:vol[:mean]");
        }
        spec.segments.push_back(seg);
    }
    return spec;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const ReturnUnits units = kUnits.at(a.units);
    std::optional<ReturnSeries> series;
    json config = {{"generator", a.generator}, {"seed", a.seed}, {"units", a.units}};
    try {
        if (a.generator == "gaussian") {
            series = gen_iid_gaussian(a.n, a.mean, a.sd, a.seed, units);
            config.update({{"n", a.n}, {"mean", a.mean}, {"sd", a.sd}});
        } else if (a.generator == "garch") {
            series = gen_garch(a.n, GarchParams{a.omega, a.garch_alpha, a.garch_beta}, a.seed,
                               units);
            config.update({{"n", a.n},
                           {"omega", a.omega},
                           {"garch_alpha", a.garch_alpha},
                           {"garch_beta", a.garch_beta}});
        } else {
            series = gen_regime_shift(parse_segments(a.segments), a.seed, units);
            config["segments"] = a.segments;
        }
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }

    const PriceSeries prices = prices_from_returns(*series);
    std::ostringstream csv;
    csv << "date,price\n";
    for (std::size_t i = 0; i < prices.size(); ++i)
        csv << format_iso_date(prices.dates()[i]) << ',' << fmt::format("{:.6f}", prices.prices()[i])
            << '\n';

    if (a.output.empty()) {
        out << csv.str();
        return kOk;
    }
    io::RunManifest manifest;
    manifest.command = "simulate";
    manifest.started = now_utc();
    manifest.config = config;
    manifest.master_seed = a.seed;
    const fs::path path(a.output);
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    io::write_output(dir, path.filename().string(), csv.str(), manifest);
    manifest.finished = now_utc();
    std::ofstream mf(dir / (path.filename().string() + ".manifest.json"));
    mf << manifest.to_json().dump(2) << '\n';
    return kOk;
}

struct ValidateArgs {
    SplitValidityConfig split;
    OnlineCoverageConfig online;
    std::optional<double> target_coverage;
    std::uint64_t seed = 2025;
    std::string out_dir;
};

int cmd_validate_theory(ValidateArgs a, std::ostream& out) {
    if (a.target_coverage && std::fabs(*a.target_coverage - (1.0 - a.split.alpha)) > 1e-12)
        throw UsageError(fmt::format("--target-coverage {} does not equal 1 - alpha = {}",
                                     *a.target_coverage, 1.0 - a.split.alpha));
    io::RunManifest manifest;
    manifest.command = "validate-theory";
    manifest.started = now_utc();
    a.split.master_seed = a.seed;
    a.online.seed = a.seed;
    a.online.alpha = a.split.alpha;
    try {
        a.split.validate();
        a.online.validate();
    } catch (const PreconditionError& e) {
        throw UsageError(e.what());
    }

    const SplitValidityResult s = validate_split_conformal(a.split);
    const OnlineCoverageResult o = validate_online_coverage(a.online);
    const bool passed = s.passed && o.passed;
    const json doc = {
        {"split_conformal",
         {{"observed_coverage", s.mean_coverage},
          {"standard_error", s.standard_error},
          {"lower", s.lower},
          {"upper", s.upper},
          {"trials", s.trials},
          {"n_cal", a.split.n_cal},
          {"n_test", a.split.n_test},
          {"passed", s.passed}}},
        {"online_coverage",
         {{"observed_coverage", o.running_coverage},
          {"target", 1.0 - a.online.alpha},
          {"tolerance", a.online.coverage_tolerance},
          {"threshold_half", o.threshold_half},
          {"threshold_final", o.threshold_final},
          {"settle_tolerance", a.online.settle_tolerance},
          {"length", a.online.length},
          {"passed", o.passed}}},
        {"passed", passed},
        {"manifest", "manifest.json"}};

    const fs::path dir = a.out_dir.empty() ? default_output_dir() : fs::path(a.out_dir);
    io::write_output(dir, "validation.json", doc.dump(2) + "\n", manifest);
    manifest.config = {{"alpha", a.split.alpha},
                       {"trials", a.split.trials},
                       {"n_cal", a.split.n_cal},
                       {"n_test", a.split.n_test},
                       {"length", a.online.length},
                       {"gamma0", a.online.gamma0},
                       {"lambda", a.online.lambda},
                       {"beta", a.online.beta}};
    manifest.master_seed = a.seed;
    finish_manifest(dir, manifest);

    out << fmt::format("split conformal: coverage {:.6f} in [{:.6f}, {:.6f}] {}\n",
                       s.mean_coverage, s.lower, s.upper, s.passed ? "PASS" : "FAIL");
    out << fmt::format("online update:   coverage {:.6f} (target {:.4f} +- {}), |C_T - C_T/2| = {:.6f} {}\n",
                       o.running_coverage, 1.0 - a.online.alpha, a.online.coverage_tolerance,
                       std::fabs(o.threshold_final - o.threshold_half), o.passed ? "PASS" : "FAIL");
    return passed ? kOk : kValidationFailed;
}

// Applies `--config FILE` (key = value lines, optionally under [section]
// headers) to `sub` without overriding flags given on the command line.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::stringstream body;
    body << '[' << sub->get_name() << "]\n";
    for (std::string line; std::getline(in, line);) {
        // Keys may be spelled with underscores (refit_every) or dashes.
        const auto eq = line.find('=');
        if (eq != std::string::npos)
            std::replace(line.begin(), line.begin() + static_cast<std::ptrdiff_t>(eq), '_', '-');
        body << line << '\n';
    }
    app.parse_from_stream(body);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rolling conformal prediction intervals for return series"};
    app.name("tempconf");
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_version_flag("--version", std::string(io::kVersion));

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path,
                        "key = value file; command-line flags take precedence")
            ->check(CLI::ExistingFile);
    };
    const std::string out_help =
        "Output directory (default: $TEMPCONF_OUTPUT_DIR, else the working directory)";

    BacktestArgs bt;
    auto* backtest = app.add_subcommand("backtest", "Run one model (or all) over a price series");
    add_input_flags(backtest, bt.input);
    add_model_flags(backtest, bt.model);
    std::vector<std::string> model_choices = keys(kModels);
    model_choices.push_back("all");
    backtest->add_option("--model", bt.which, "tcp, qr, garch, hist or all")
        ->check(CLI::IsMember(model_choices))
        ->capture_default_str();
    backtest->add_option("--out", bt.out_dir, out_help);
    add_config(backtest);

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "TCP sensitivity grid over window and gamma0");
    add_input_flags(sweep, sw.input);
    add_model_flags(sweep, sw.model);
    // The grid replaces the single-value window and gamma0 flags.
    sweep->remove_option(sweep->get_option_no_throw("--gamma0"));
    sweep->remove_option(sweep->get_option_no_throw("--window"));
    sweep->add_option("--w", sw.windows, "Window sizes")->delimiter(',')->capture_default_str();
    sweep->add_option("--gamma0", sw.gamma0s, "Initial step sizes")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--threads", sw.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    sweep->add_option("--out", sw.out_dir, out_help);
    add_config(sweep);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Write a synthetic price series as CSV");
    simulate->add_option("generator", sim.generator, "gaussian, garch or regime")
        ->required()
        ->check(CLI::IsMember({"gaussian", "garch", "regime"}));
    simulate->add_option("--n", sim.n, "Number of returns (gaussian, garch)")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Seed")->capture_default_str();
    simulate->add_option("--mean", sim.mean, "Mean return (gaussian)")->capture_default_str();
    simulate->add_option("--sd", sim.sd, "Return standard deviation (gaussian)")
        ->capture_default_str();
    simulate->add_option("--omega", sim.omega, "GARCH omega")->capture_default_str();
    simulate->add_option("--garch-alpha", sim.garch_alpha, "GARCH alpha")->capture_default_str();
    simulate->add_option("--garch-beta", sim.garch_beta, "GARCH beta")->capture_default_str();
    simulate->add_option("--segments", sim.segments, "Regime segments as length:vol[:mean]")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--units", sim.units, "Return units")
        ->check(CLI::IsMember(keys(kUnits)))
        ->capture_default_str();
    simulate->add_option("--output", sim.output, "Output file (default: standard output)");
    add_config(simulate);

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate-theory",
                                        "Monte-Carlo checks of the coverage guarantees");
    validate->add_option("--trials", va.split.trials, "Split-conformal trials")
        ->capture_default_str();
    validate->add_option("--alpha", va.split.alpha, "Miscoverage level")->capture_default_str();
    validate->add_option("--target-coverage", va.target_coverage,
                         "Expected coverage; must equal 1 - alpha");
    validate->add_option("--n-cal", va.split.n_cal, "Calibration size")->capture_default_str();
    validate->add_option("--n-test", va.split.n_test, "Test size per trial")
        ->capture_default_str();
    validate->add_option("--length", va.online.length, "Online-update series length")
        ->capture_default_str();
    validate->add_option("--gamma0", va.online.gamma0, "Online initial step size")
        ->capture_default_str();
    validate->add_option("--lambda", va.online.lambda, "Online step-size decay rate")
        ->capture_default_str();
    validate->add_option("--beta", va.online.beta, "Online step-size decay exponent")
        ->capture_default_str();
    validate->add_option("--seed", va.seed, "Master seed")->capture_default_str();
    validate->add_option("--out", va.out_dir, out_help);
    add_config(validate);

    try {
        app.parse(argc, argv);
        CLI::App* chosen = app.get_subcommands().front();
        if (!config_path.empty()) apply_config(app, chosen, config_path);

        if (chosen == backtest) return cmd_backtest(bt, out, err);
        if (chosen == sweep) return cmd_sweep(sw, out, err);
        if (chosen == simulate) return cmd_simulate(sim, out);
        return cmd_validate_theory(va, out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kOk;
        for (CLI::App* sub : app.get_subcommands()) err << '\n' << sub->help();
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << '\n';
        return kModelError;
    } catch (const NumericError& e) {
        err << "model error: " << e.what() << '\n';
        return kModelError;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace tempconf::cli
