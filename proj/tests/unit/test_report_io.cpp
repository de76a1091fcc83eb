#include "tempconf/errors.hpp"
#include "tempconf/report_io.hpp"
#include "tempconf/synth.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace tempconf;
using io::json;

namespace {

BacktestReport small_report(ModelId model) {
    BacktestConfig c;
    c.model = model;
    c.window = 100;
    c.refit_every = 50;
    return run_model(gen_garch(300, {0.05, 0.1, 0.85}, 1), c);
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Format, FourDecimals) {
    EXPECT_EQ(io::fixed4(0.84962), "0.8496");
    EXPECT_EQ(io::fixed4(2.0), "2.0000");
    EXPECT_EQ(io::fixed4(-0.00001), "0.0000");
    EXPECT_DOUBLE_EQ(io::round4(2.66114), 2.6611);
}

TEST(StateJson, RoundTrip) {
    ConformalState s;
    s.threshold = -0.123456789012345;
    s.t = 1234;
    s.kappa = 0.1;
    s.beta = 0.9;
    const json j = io::to_json(s);
    for (const char* key : {"C", "t", "alpha", "gamma0", "lambda", "beta", "kappa"}) EXPECT_TRUE(j.contains(key));
    const ConformalState back = io::state_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.threshold, s.threshold);
    EXPECT_EQ(back.t, s.t);
    EXPECT_EQ(back.kappa, s.kappa);
    EXPECT_EQ(back.beta, s.beta);
}

TEST(StateJson, Errors) {
    json j = io::to_json(ConformalState{});
    j.erase("gamma0");
    EXPECT_THROW(io::state_from_json(j), ParseError);
    j = io::to_json(ConformalState{});
    j["alpha"] = "high";
    EXPECT_THROW(io::state_from_json(j), ParseError);
    j = io::to_json(ConformalState{});
    j["beta"] = 0.2;
    EXPECT_THROW(io::state_from_json(j), PreconditionError);
}

TEST(GarchJson, Fields) {
    const GarchFit fit{{0.05, 0.1, 0.85}, -1234.5, 0.0};
    const json j = io::to_json(fit);
    EXPECT_EQ(j.at("omega"), 0.05);
    EXPECT_EQ(j.at("alpha"), 0.1);
    EXPECT_EQ(j.at("beta"), 0.85);
    EXPECT_EQ(j.at("loglik"), -1234.5);
}

TEST(ModelJson, DumpsTrees) {
    const auto r = gen_iid_gaussian(200, 0, 1, 2);
    const FeatureMatrix X = build_features(r);
    GBTConfig c;
    c.n_trees = 3;
    const auto m = fit_quantile_gbt(X, QuantileLevel(0.9), c);
    const json j = io::to_json(m);
    EXPECT_EQ(j.at("tau"), 0.9);
    EXPECT_EQ(j.at("trees").size(), 3u);
    EXPECT_EQ(j.at("features"), kFeatureCount);
    EXPECT_EQ(j.at("trees")[0].size(), m.trees()[0].nodes.size());
}

TEST(RecordsCsv, TcpColumns) {
    const auto rep = small_report(ModelId::tcp);
    std::ostringstream out;
    io::write_records_csv(out, rep);
    const auto ls = lines(out.str());
    ASSERT_EQ(ls.size(), rep.records.size() + 1);
    EXPECT_EQ(ls[0], "t,date,r,lower,upper,covered,C,gamma");
    const auto& first = rep.records.front();
    EXPECT_EQ(ls[1], std::to_string(first.time_index) + "," + format_iso_date(first.date) + "," +
                         io::fixed4(first.r) + "," + io::fixed4(first.interval.lower) + "," +
                         io::fixed4(first.interval.upper) + "," + (first.covered ? "1" : "0") + "," +
                         io::fixed4(first.threshold) + "," + io::fixed4(first.gamma));
}

TEST(RecordsCsv, BenchmarksLeaveAdaptiveColumnsEmpty) {
    const auto rep = small_report(ModelId::hist);
    std::ostringstream out;
    io::write_records_csv(out, rep);
    const auto ls = lines(out.str());
    EXPECT_EQ(ls[1].substr(ls[1].size() - 2), ",,");
}

TEST(SummaryJson, Fields) {
    const auto rep = small_report(ModelId::garch);
    const json j = io::summary_json(rep);
    EXPECT_EQ(j.at("model"), "GARCH");
    EXPECT_EQ(j.at("n_predictions"), rep.n_predictions);
    EXPECT_DOUBLE_EQ(j.at("empirical_coverage").get<double>(), io::round4(rep.empirical_coverage));
    EXPECT_TRUE(j.contains("garch"));
    EXPECT_FALSE(j.contains("final_state"));
    EXPECT_EQ(j.at("manifest"), "manifest.json");
    EXPECT_TRUE(io::summary_json(small_report(ModelId::tcp)).contains("final_state"));
}

TEST(SweepCsv, OrderAndErrorMarker) {
    SweepResult s;
    SweepCell ok;
    ok.window = 100;
    ok.gamma0 = 0.005;
    ok.coverage = 0.84961;
    ok.width = 2.6288;
    SweepCell bad;
    bad.window = 500;
    bad.gamma0 = 0.05;
    bad.error = "too short";
    s.cells = {ok, bad};
    std::ostringstream out;
    io::write_sweep_csv(out, s);
    EXPECT_EQ(out.str(), "w,gamma0,coverage,width\n100,0.0050,0.8496,2.6288\n500,0.0500,error,error\n");
}

TEST(Table, RowLayout) {
    const auto rep = small_report(ModelId::hist);
    const std::string row = io::table_row(rep);
    EXPECT_EQ(row.substr(0, 4), "HIST");
    EXPECT_NE(row.find(io::fixed4(rep.empirical_coverage)), std::string::npos);
    EXPECT_NE(io::table_header().find("Empirical Coverage"), std::string::npos);
}

TEST(Digest, KnownSha256) {
    EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Timestamp, Iso8601Utc) {
    using namespace std::chrono;
    const sys_seconds tp = sys_days{year{2024} / March / 5} + hours{7} + minutes{8} + seconds{9};
    EXPECT_EQ(io::utc_timestamp(tp), "2024-03-05T07:08:09Z");
}

TEST(Manifest, RecordsOutputsWithDigests) {
    const auto dir = std::filesystem::temp_directory_path() / "tempconf_io_test";
    std::filesystem::remove_all(dir);
    io::RunManifest m;
    m.command = "backtest";
    m.master_seed = 7;
    io::write_output(dir, "a.csv", "x,y\n1,2\n", m);
    ASSERT_EQ(m.outputs.size(), 1u);
    EXPECT_EQ(m.outputs[0].sha256, io::file_sha256(dir / "a.csv"));
    const json j = m.to_json();
    EXPECT_EQ(j.at("outputs")[0].at("file"), "a.csv");
    EXPECT_EQ(j.at("version"), std::string(io::kVersion));
    EXPECT_EQ(j.at("master_seed"), 7);
    EXPECT_FALSE(j.contains("input"));
    std::filesystem::remove_all(dir);
}
