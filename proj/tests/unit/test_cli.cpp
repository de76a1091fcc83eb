#include "cli.hpp"

#include "tempconf/report_io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using tempconf::io::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "tempconf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tempconf::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("tempconf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string simulated(std::size_t n, const std::string& gen = "garch") {
        const std::string p = path("prices.csv");
        EXPECT_EQ(run({"simulate", gen, "--n", std::to_string(n), "--seed", "7", "--output", p}).code, 0);
        return p;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpOnEverySubcommand) {
    EXPECT_EQ(run({"--help"}).code, 0);
    for (const char* sub : {"backtest", "sweep", "simulate", "validate-theory"}) {
        const auto r = run({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        EXPECT_NE(r.out.find("--"), std::string::npos);
    }
    const auto bt = run({"backtest", "--help"}).out;
    for (const char* flag : {"--model", "--alpha", "--window", "--gamma0", "--lambda", "--beta", "--kappa",
                             "--refit-every", "--threshold-mode", "--qr-mode", "--input", "--config", "--out"})
        EXPECT_NE(bt.find(flag), std::string::npos) << flag;
    const auto sw = run({"sweep", "--help"}).out;
    EXPECT_NE(sw.find("--w"), std::string::npos);
    const auto vt = run({"validate-theory", "--help"}).out;
    for (const char* flag : {"--trials", "--alpha", "--target-coverage"})
        EXPECT_NE(vt.find(flag), std::string::npos) << flag;
}

TEST_F(Cli, SimulateLengthAndDeterminism) {
    const auto a = run({"simulate", "garch", "--n", "5000", "--seed", "7", "--output", path("a.csv")});
    const auto b = run({"simulate", "garch", "--n", "5000", "--seed", "7", "--output", path("b.csv")});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    const std::string text = slurp(path("a.csv"));
    EXPECT_EQ(line_count(text), 5002u);  // header + 5001 prices
    EXPECT_EQ(text.substr(0, 11), "date,price\n");
    EXPECT_EQ(tempconf::io::file_sha256(path("a.csv")), tempconf::io::file_sha256(path("b.csv")));
    const json m = json::parse(slurp(path("a.csv.manifest.json")));
    EXPECT_EQ(m.at("outputs")[0].at("sha256"), tempconf::io::file_sha256(path("a.csv")));
}

TEST_F(Cli, SimulateToStdoutAndGenerators) {
    const auto r = run({"simulate", "gaussian", "--n", "10"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(line_count(r.out), 12u);
    const auto reg = run({"simulate", "regime", "--segments", "30:1,20:3"});
    EXPECT_EQ(reg.code, 0);
    EXPECT_EQ(line_count(reg.out), 52u);
    EXPECT_EQ(run({"simulate", "arima"}).code, 1);
    EXPECT_EQ(run({"simulate", "regime", "--segments", "30"}).code, 1);
    EXPECT_EQ(run({"simulate", "gaussian", "--sd", "0"}).code, 1);
}

TEST_F(Cli, BacktestWritesFiles) {
    const std::string input = simulated(400);
    const auto r = run({"backtest", "--model", "tcp", "--alpha", "0.05", "--window", "252", "--gamma0", "0.01",
                        "--refit-every", "50", "--input", input, "--out", path("out")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("TCP"), std::string::npos);
    for (const char* f : {"tcp_records.csv", "tcp_summary.json", "tcp_state.json", "manifest.json"})
        EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
    const json summary = json::parse(slurp(dir_ / "out" / "tcp_summary.json"));
    EXPECT_EQ(summary.at("first_index"), 278);
    const json manifest = json::parse(slurp(dir_ / "out" / "manifest.json"));
    EXPECT_EQ(manifest.at("input").at("sha256"), tempconf::io::file_sha256(input));
    EXPECT_EQ(manifest.at("config").at("window"), 252);
    EXPECT_EQ(manifest.at("outputs").size(), 3u);
}

TEST_F(Cli, BacktestRerunIsByteIdentical) {
    const std::string input = simulated(350);
    ASSERT_EQ(run({"backtest", "--input", input, "--refit-every", "20", "--out", path("a")}).code, 0);
    ASSERT_EQ(run({"backtest", "--input", input, "--refit-every", "20", "--out", path("b")}).code, 0);
    for (const char* f : {"tcp_records.csv", "tcp_summary.json", "tcp_state.json"})
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(Cli, BacktestAllModels) {
    const std::string input = simulated(400);
    const auto r = run({"backtest", "--model", "all", "--refit-every", "100", "--input", input, "--out", path("all")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* m : {"tcp", "qr", "garch", "hist"}) {
        EXPECT_TRUE(fs::exists(dir_ / "all" / (std::string(m) + "_summary.json"))) << m;
        EXPECT_TRUE(fs::exists(dir_ / "all" / (std::string(m) + "_records.csv"))) << m;
    }
    const json warm = json::parse(slurp(dir_ / "all" / "warmup.json"));
    EXPECT_EQ(warm.at("models").size(), 4u);
    EXPECT_EQ(line_count(r.out), 5u);
}

TEST_F(Cli, BacktestUsageAndDataErrors) {
    const auto missing = run({"backtest", "--model", "tcp"});
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("--input"), std::string::npos);
    EXPECT_NE(missing.err.find("Usage"), std::string::npos);

    const std::string input = simulated(400);
    EXPECT_EQ(run({"backtest", "--input", input, "--alpha", "1.5"}).code, 1);
    EXPECT_EQ(run({"backtest", "--input", input, "--model", "arima"}).code, 1);
    EXPECT_EQ(run({"backtest", "--input", input, "--beta", "0.4"}).code, 1);

    std::ofstream(path("bad.csv")) << "date,price\n2020-01-02,100\n2020-01-03,abc\n";
    EXPECT_EQ(run({"backtest", "--input", path("bad.csv"), "--out", path("o")}).code, 2);
    std::ofstream(path("short.csv")) << "date,price\n2020-01-02,100\n2020-01-03,101\n2020-01-06,102\n";
    EXPECT_EQ(run({"backtest", "--input", path("short.csv"), "--out", path("o")}).code, 2);
}

TEST_F(Cli, RejectedRowsReportedOnStderr) {
    std::ofstream out(path("gap.csv"));
    out << "date,price\n";
    for (int i = 0; i < 400; ++i) {
        const auto d = tempconf::business_days(std::chrono::year{2001} / 1 / 2, 400)[static_cast<std::size_t>(i)];
        out << tempconf::format_iso_date(d) << ',' << (i == 10 ? 0.0 : 100.0 + (i % 7)) << '\n';
    }
    out.close();
    const auto r = run({"backtest", "--model", "hist", "--input", path("gap.csv"), "--out", path("o")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("12,"), std::string::npos);
}

TEST_F(Cli, ModelFailureExitsThree) {
    std::ofstream out(path("flat.csv"));
    out << "date,price\n";
    const auto days = tempconf::business_days(std::chrono::year{2001} / 1 / 2, 300);
    for (const auto& d : days) out << tempconf::format_iso_date(d) << ",100\n";
    out.close();
    EXPECT_EQ(run({"backtest", "--model", "garch", "--input", path("flat.csv"), "--out", path("o")}).code, 3);
}

TEST_F(Cli, ConfigFilePrecedence) {
    const std::string input = simulated(400);
    std::ofstream(path("run.toml")) << "# comment\nwindow = 120\nrefit_every = 100\nmodel = \"hist\"\n";
    auto r = run({"backtest", "--input", input, "--config", path("run.toml"), "--out", path("c1")});
    ASSERT_EQ(r.code, 0) << r.err;
    json m = json::parse(slurp(dir_ / "c1" / "manifest.json"));
    EXPECT_EQ(m.at("config").at("window"), 120);
    EXPECT_EQ(m.at("config").at("model"), "hist");
    EXPECT_EQ(m.at("config").at("alpha"), 0.05);

    r = run({"backtest", "--input", input, "--config", path("run.toml"), "--window", "150", "--out", path("c2")});
    ASSERT_EQ(r.code, 0) << r.err;
    m = json::parse(slurp(dir_ / "c2" / "manifest.json"));
    EXPECT_EQ(m.at("config").at("window"), 150);
    EXPECT_EQ(m.at("config").at("refit_every"), 100);

    std::ofstream(path("bad.toml")) << "windw = 120\n";
    EXPECT_EQ(run({"backtest", "--input", input, "--config", path("bad.toml")}).code, 1);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
    const std::string input = simulated(300);
    ::setenv("TEMPCONF_OUTPUT_DIR", path("envout").c_str(), 1);
    const auto r = run({"backtest", "--model", "hist", "--input", input});
    ::unsetenv("TEMPCONF_OUTPUT_DIR");
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(dir_ / "envout" / "hist_summary.json"));
}

TEST_F(Cli, StateResume) {
    const std::string input = simulated(400);
    ASSERT_EQ(run({"backtest", "--input", input, "--refit-every", "100", "--out", path("s1")}).code, 0);
    const auto r = run({"backtest", "--input", input, "--refit-every", "100", "--state-in",
                        (dir_ / "s1" / "tcp_state.json").string(), "--out", path("s2")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json first = json::parse(slurp(dir_ / "s1" / "tcp_state.json"));
    const json second = json::parse(slurp(dir_ / "s2" / "tcp_state.json"));
    EXPECT_EQ(second.at("t").get<int>(), 2 * first.at("t").get<int>());
    std::ofstream(path("broken.json")) << "{\"C\": 1}";
    EXPECT_EQ(run({"backtest", "--input", input, "--state-in", path("broken.json"), "--out", path("s3")}).code, 2);
}

TEST_F(Cli, SweepGrid) {
    const std::string input = simulated(400);
    auto r = run({"sweep", "--input", input, "--w", "100", "--gamma0", "0.01", "--refit-every", "100", "--out", path("one")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(line_count(slurp(dir_ / "one" / "sweep.csv")), 2u);

    r = run({"sweep", "--input", input, "--refit-every", "100", "--out", path("grid")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = slurp(dir_ / "grid" / "sweep.csv");
    EXPECT_EQ(line_count(csv), 10u);
    EXPECT_EQ(csv.substr(0, 24), "w,gamma0,coverage,width\n");
    // w = 500 cannot run on 400 returns: those rows carry the marker, the sweep still succeeds.
    EXPECT_NE(csv.find("500,0.0050,error,error"), std::string::npos);
    EXPECT_NE(csv.find("100,0.0050,0."), std::string::npos);

    r = run({"sweep", "--input", input, "--w", "500", "--refit-every", "100", "--out", path("none")});
    EXPECT_EQ(r.code, 3);
}

TEST_F(Cli, ValidateTheory) {
    const auto r = run({"validate-theory", "--trials", "1", "--n-test", "1000", "--length", "20000", "--out", path("v")});
    EXPECT_TRUE(r.code == 0 || r.code == 4) << r.err;
    const json j = json::parse(slurp(dir_ / "v" / "validation.json"));
    EXPECT_EQ(j.at("split_conformal").at("trials"), 1);
    EXPECT_TRUE(j.at("split_conformal").contains("observed_coverage"));
    EXPECT_TRUE(j.at("online_coverage").contains("tolerance"));
    EXPECT_EQ(j.at("passed").get<bool>(), r.code == 0);

    EXPECT_EQ(run({"validate-theory", "--alpha", "0.05", "--target-coverage", "0.9"}).code, 1);
    EXPECT_NE(run({"validate-theory", "--alpha", "0.1", "--trials", "2", "--n-test", "500", "--length", "5000",
                   "--target-coverage", "0.9", "--out", path("v2")}).code,
              1);
}

TEST_F(Cli, ValidationFailureExitsFour) {
    // A settle tolerance this short series cannot meet: the online check fails.
    const auto r = run({"validate-theory", "--trials", "2", "--n-test", "200", "--length", "50", "--gamma0", "5",
                        "--out", path("v")});
    EXPECT_EQ(r.code, 4);
}
