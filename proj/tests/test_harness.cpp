#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "koopguard/config.hpp"
#include "koopguard/csv.hpp"
#include "koopguard/errors.hpp"
#include "koopguard/report.hpp"
#include "koopguard/runner.hpp"

using namespace koopguard;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name)
{
    fs::path dir = fs::temp_directory_path() / "koopguard_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& body)
{
    std::ofstream(p) << body;
}

const RunResult& cached(const std::string& scenario)
{
    static std::map<std::string, RunResult> cache;
    auto it = cache.find(scenario);
    if (it == cache.end()) {
        RunConfig cfg = default_config();
        cfg.use_scenario(scenario);
        it = cache.emplace(scenario, run_scenario(cfg)).first;
    }
    return it->second;
}

}  // namespace

TEST(Csv, OneRecordTwoLines)
{
    RunRecord r;
    r.t = 1.0;
    r.y_meas = 3.7;
    r.u_cmd = -5.0;
    std::ostringstream out;
    write_csv({r}, out);
    std::string s = out.str();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
    EXPECT_EQ(s.substr(0, s.find('\n')), "t,y_true,y_meas,y_pred,u_cmd,u_applied,soc,r_D,det_flag,r_I,iso_flag");
    EXPECT_EQ(s.substr(s.find('\n') + 1), "1,,3.7000000000000002,,-5,,,,0,,0\n");
}

TEST(Csv, RoundTripBitExact)
{
    std::vector<RunRecord> recs;
    for (int k = 0; k < 50; ++k) {
        RunRecord r;
        r.t = k * 0.1;
        r.y_meas = 3.6 + std::sqrt(2.0) * 1e-3 * k;
        r.u_cmd = -5.0 / 3.0 * std::cos(k);
        r.r_I = k % 7 == 0 ? std::optional<double>(1.0 / 3.0) : std::nullopt;
        recs.push_back(r);
    }
    auto path = tmp("round.csv");
    write_csv(recs, path.string());
    auto frames = ingest_csv(path.string());
    auto back = read_records(path.string());
    ASSERT_EQ(frames.size(), recs.size());
    for (size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(frames[i].t, recs[i].t);
        EXPECT_EQ(frames[i].y, recs[i].y_meas);
        EXPECT_EQ(frames[i].u, recs[i].u_cmd);
        EXPECT_EQ(back[i].r_I, recs[i].r_I);
        EXPECT_FALSE(back[i].y_pred);
    }
}

TEST(Ingest, ThreeRows)
{
    auto p = tmp("three.csv");
    write_file(p, "t,y,u\n0,3.6,-5\n1,3.61,-5\n2,3.62,-5\n");
    auto f = ingest_csv(p.string());
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[2].y, 3.62);
}

TEST(Ingest, NonMonotoneTime)
{
    auto p = tmp("nonmono.csv");
    write_file(p, "t,y,u\n0,3.6,-5\n2,3.61,-5\n1,3.62,-5\n");
    try {
        ingest_csv(p.string());
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
    }
}

TEST(Ingest, GapRejected)
{
    auto p = tmp("gap.csv");
    write_file(p, "t,y,u\n0,3.6,-5\n1,3.61,-5\n3,3.62,-5\n");
    EXPECT_THROW(ingest_csv(p.string()), ParseError);
}

TEST(Ingest, MalformedRowReportsLine)
{
    auto p = tmp("bad.csv");
    write_file(p, "t,y,u\n0,3.6,-5\n1,abc,-5\n");
    try {
        ingest_csv(p.string());
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    write_file(p, "t,y,u\n0,3.6\n");
    EXPECT_THROW(ingest_csv(p.string()), ParseError);
    write_file(p, "t,v,u\n0,3.6,-5\n");
    EXPECT_THROW(ingest_csv(p.string()), ParseError);
}

TEST(Config, DefaultsRoundTripThroughJson)
{
    RunConfig a = default_config();
    RunConfig b = from_json(to_json(a));
    EXPECT_EQ(to_json(a), to_json(b));
    EXPECT_EQ(b.window.W, 23);
    EXPECT_EQ(b.window.W_tilde, 8);
    EXPECT_EQ(b.window.tau, 13);
    EXPECT_EQ(b.detector.threshold, 0.002);
    EXPECT_EQ(b.isolator.epsilon, 0.12);
}

TEST(Config, OverlayPatchesDefaults)
{
    auto p = tmp("overlay.json");
    write_file(p, R"({"detector": {"threshold": 0.005}, "window": {"tau": 5}})");
    RunConfig c = load_config({p.string()});
    EXPECT_EQ(c.detector.threshold, 0.005);
    EXPECT_EQ(c.window.tau, 5);
    EXPECT_EQ(c.window.W, 23);
}

TEST(Config, Errors)
{
    auto p = tmp("badcfg.json");
    write_file(p, R"({"battery": {"ocv_curve": [[0, 3.0], [1, 2.0]]}})");
    EXPECT_THROW(load_config({p.string()}), ConfigError);
    write_file(p, R"({"timing": {"dt_sim": 0.3}})");
    EXPECT_THROW(load_config({p.string()}), ConfigError);
    write_file(p, "{ not json");
    EXPECT_THROW(load_config({p.string()}), ConfigError);
    EXPECT_THROW(load_config({tmp("missing.json").string()}), ConfigError);
    RunConfig c = default_config();
    EXPECT_THROW(c.use_scenario("replay"), ConfigError);
}

TEST(ExitCodes, Distinct)
{
    EXPECT_EQ(ConfigError("x").exit_code(), 2);
    EXPECT_EQ(ParseError("x").exit_code(), 3);
    EXPECT_EQ(OverchargeAbort("x").exit_code(), 4);
    EXPECT_EQ(CalibrationError("x").exit_code(), 5);
}

TEST(RunScenario, NominalHasNoFlags)
{
    const RunResult& r = cached("none");
    EXPECT_TRUE(r.events.empty());
    for (const auto& rec : r.records)
        EXPECT_EQ(rec.det_flag, 0);
    Report rep = summarize(r.records);
    EXPECT_FALSE(rep.detection_latency);
    ASSERT_TRUE(rep.final_soc);
    EXPECT_NEAR(*rep.final_soc, 0.94, 0.005);
    EXPECT_FALSE(*rep.overcharge);
}

TEST(RunScenario, WarmUpRowsEmpty)
{
    const RunResult& r = cached("none");
    for (int k = 0; k < 23; ++k) {
        EXPECT_FALSE(r.records[k].y_pred);
        EXPECT_FALSE(r.records[k].r_D);
    }
    EXPECT_TRUE(r.records[23].y_pred);
}

TEST(RunScenario, ActuationOvercharges)
{
    const RunResult& r = cached("actuation");
    Report rep = summarize(r.records);
    ASSERT_TRUE(rep.overcharge);
    EXPECT_TRUE(*rep.overcharge);
    ASSERT_TRUE(rep.detection_latency);
    EXPECT_LE(*rep.detection_latency, 8.0);
    // controller keeps its own view of the current
    for (const auto& rec : r.records)
        if (rec.t >= 700 && rec.t < 1600)
            EXPECT_NEAR(*rec.u_applied - rec.u_cmd, -10.0, 1e-12);
}

TEST(RunScenario, SensorDelaysConstantVoltage)
{
    Report nom = summarize(cached("none").records);
    Report sen = summarize(cached("sensor").records);
    ASSERT_TRUE(nom.cc_end && sen.cc_end);
    EXPECT_GT(*sen.cc_end, *nom.cc_end);
    for (const auto& rec : cached("sensor").records)
        if (rec.t >= 700 && rec.t < 1600)
            EXPECT_NEAR(rec.y_meas - *rec.y_true, -0.1, 1e-12);
}

TEST(RunScenario, Deterministic)
{
    RunConfig cfg = default_config();
    cfg.use_scenario("sensor");
    std::ostringstream a, b;
    write_csv(run_scenario(cfg).records, a);
    write_csv(run_scenario(cfg).records, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunScenario, OfflineDetectionReproducesFlags)
{
    const RunResult& r = cached("actuation");
    auto path = tmp("actuation.csv");
    write_csv(r.records, path.string());
    RunResult off = detect_offline(ingest_csv(path.string()), default_config());
    ASSERT_EQ(off.records.size(), r.records.size());
    for (size_t i = 0; i < r.records.size(); ++i) {
        ASSERT_EQ(off.records[i].det_flag, r.records[i].det_flag) << i;
        ASSERT_EQ(off.records[i].iso_flag, r.records[i].iso_flag) << i;
        ASSERT_EQ(off.records[i].r_D, r.records[i].r_D) << i;
    }
}

TEST(RunScenario, OverchargeAbortPropagates)
{
    RunConfig cfg = default_config();
    cfg.use_scenario("actuation");
    cfg.scenario.signal = Constant{-25.0};
    EXPECT_THROW(run_scenario(cfg), OverchargeAbort);
}

TEST(Summarize, ReportsFlagIntervals)
{
    Report rep = summarize(cached("sensor").records);
    ASSERT_EQ(rep.intervals.size(), 1u);
    EXPECT_EQ(rep.intervals[0].on, 700.0);
    ASSERT_TRUE(rep.intervals[0].off);
    EXPECT_TRUE(rep.intervals[0].r_I_max);
    nlohmann::json j = to_json(rep);
    EXPECT_EQ(j["flag_intervals"].size(), 1u);
    EXPECT_NE(to_text(rep).find("detection_latency: 0"), std::string::npos);
}

TEST(Calibrate, DetectionPositive)
{
    auto overlay = calibrate(default_config(), "detection");
    double thr = overlay["detector"]["threshold"].get<double>();
    EXPECT_GT(thr, 0.0);
    EXPECT_LT(thr, 0.002);
}

TEST(Calibrate, IsolationPositive)
{
    auto overlay = calibrate(default_config(), "isolation");
    EXPECT_GT(overlay["isolator"]["epsilon"].get<double>(), 0.0);
}

TEST(Calibrate, NoWarmUpIsError)
{
    RunConfig cfg = default_config();
    cfg.timing.t_max = 20.0;
    EXPECT_THROW(calibrate(cfg, "detection"), CalibrationError);
}

TEST(Calibrate, UnknownTarget)
{
    EXPECT_THROW(calibrate(default_config(), "both"), ArgumentError);
}

TEST(Summarize, NominalResidualStopsAtFirstFlagOffline)
{
    auto path = tmp("sensor_offline.csv");
    write_csv(cached("sensor").records, path.string());
    RunResult off = detect_offline(ingest_csv(path.string()), default_config());
    Report rep = summarize(off.records);
    EXPECT_FALSE(rep.attack_start);
    ASSERT_TRUE(rep.max_nominal_residual);
    EXPECT_LT(*rep.max_nominal_residual, 0.002);
}
