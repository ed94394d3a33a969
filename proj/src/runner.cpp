#include "koopguard/runner.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "koopguard/errors.hpp"
#include "koopguard/isolator.hpp"

namespace koopguard {

namespace {

void fill(RunRecord& rec, const MonitorOutput& mo)
{
    rec.y_pred = mo.y_pred;
    rec.r_D = mo.r_D;
    rec.det_flag = mo.det_flag;
    rec.r_I = mo.r_I;
    rec.iso_flag = mo.iso_flag;
}

}  // namespace

RunResult run_scenario(const RunConfig& cfg)
{
    cfg.validate();
    const BatteryParams& bp = cfg.battery;
    const double dts = cfg.timing.dt_sample;
    const int sub = cfg.timing.substeps();
    const double h = dts / sub;

    Charger charger(cfg.charger, bp.capacity_coulomb());
    Monitor monitor(cfg.monitor());
    BatteryState x{0.0, 0.0, cfg.charger.initial_soc};
    double i_prev = 0.0;

    RunResult res;
    const long n = static_cast<long>(std::floor(cfg.timing.t_max / dts + 1e-9));
    res.records.reserve(n + 1);
    for (long k = 0; k <= n; ++k) {
        const double t = k * dts;
        RunRecord rec;
        rec.t = t;
        rec.y_true = terminal_voltage(x, i_prev, bp);
        rec.y_meas = apply_sensor(*rec.y_true, t, cfg.scenario);
        rec.u_cmd = charger.command(rec.y_meas, dts);
        Actuation act = apply_actuation(rec.u_cmd, t, cfg.scenario, cfg.charger.i_limit);
        if (act.saturated)
            ++res.saturated_samples;
        rec.u_applied = act.current;
        rec.soc = x.soc;
        fill(rec, monitor.push(t, rec.y_meas, rec.u_cmd));
        res.records.push_back(rec);

        if (charger.state().phase == Phase::Done)
            break;
        for (int s = 0; s < sub; ++s)
            x = step(x, act.current, h, bp);
        i_prev = act.current;
    }
    if (res.saturated_samples > 0)
        spdlog::warn("applied current saturated at {} A on {} samples", cfg.charger.i_limit,
                     res.saturated_samples);
    res.events = monitor.detector().events;
    res.windows = monitor.windows();
    return res;
}

RunResult detect_offline(const std::vector<Frame>& frames, const RunConfig& cfg)
{
    Monitor monitor(cfg.monitor());
    RunResult res;
    res.records.reserve(frames.size());
    for (const Frame& f : frames) {
        RunRecord rec;
        rec.t = f.t;
        rec.y_meas = f.y;
        rec.u_cmd = f.u;
        fill(rec, monitor.push(f.t, f.y, f.u));
        res.records.push_back(rec);
    }
    res.events = monitor.detector().events;
    res.windows = monitor.windows();
    return res;
}

std::vector<double> isolation_trace(const RunResult& r)
{
    std::vector<double> out;
    for (const auto& w : r.windows)
        out.push_back(w.r_I);
    return out;
}

nlohmann::json calibrate(const RunConfig& cfg, const std::string& which)
{
    if (which == "detection") {
        RunConfig c = cfg;
        c.use_scenario("none");
        RunResult r = run_scenario(c);
        std::vector<double> res;
        for (const auto& rec : r.records)
            if (rec.r_D)
                res.push_back(*rec.r_D);
        double thr = calibrate_detection(res, cfg.detector.margin, cfg.detector.floor);
        spdlog::info("detection threshold {:.6g} from {} nominal samples", thr, res.size());
        return {{"detector", {{"threshold", thr}}}};
    }
    if (which == "isolation") {
        auto run_fn = [&](double u_max) {
            RunConfig c = cfg;
            c.scenario.kind = AttackKind::Actuation;
            c.scenario.mode = ActuationMode::Additive;
            c.scenario.t_start = cfg.isolator.calibration_start;
            c.scenario.t_end = cfg.isolator.calibration_end;
            c.scenario.signal = Constant{u_max};
            return isolation_trace(run_scenario(c));
        };
        double eps = calibrate_isolation(run_fn, cfg.isolator.calibration_current, cfg.isolator.margin);
        spdlog::info("isolation epsilon {:.6g}", eps);
        if (eps >= 1.0)
            spdlog::warn("isolation epsilon {:.4g} >= 1: every window will classify as actuation", eps);
        return {{"isolator", {{"epsilon", eps}}}};
    }
    throw ArgumentError("calibrate: expected 'detection' or 'isolation', got '" + which + "'");
}

}  // namespace koopguard
