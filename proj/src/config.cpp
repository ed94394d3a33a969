#include "koopguard/config.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "koopguard/errors.hpp"

namespace koopguard {

using nlohmann::json;

namespace {

AttackScenario preset(AttackKind kind, double value)
{
    AttackScenario sc;
    sc.kind = kind;
    sc.t_start = 700.0;
    sc.t_end = 1600.0;
    sc.signal = Constant{value};
    return sc;
}

json signal_to_json(const Signal& s)
{
    if (const auto* c = std::get_if<Constant>(&s))
        return {{"type", "constant"}, {"value", c->value}};
    if (const auto* r = std::get_if<Ramp>(&s))
        return {{"type", "ramp"}, {"start", r->start}, {"end", r->end}};
    json pts = json::array();
    for (const auto& [t, v] : std::get<Samples>(s).points)
        pts.push_back({t, v});
    return {{"type", "samples"}, {"points", pts}};
}

Signal signal_from_json(const json& j)
{
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant")
        return Constant{j.at("value").get<double>()};
    if (type == "ramp")
        return Ramp{j.at("start").get<double>(), j.at("end").get<double>()};
    if (type == "samples") {
        Samples s;
        for (const auto& p : j.at("points"))
            s.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return s;
    }
    throw ConfigError("unknown signal type '" + type + "'");
}

json scenario_to_json(const AttackScenario& sc)
{
    return {{"kind", attack_kind_name(sc.kind)},
            {"t_start", sc.t_start},
            {"t_end", sc.t_end},
            {"signal", signal_to_json(sc.signal)},
            {"mode", sc.mode == ActuationMode::Override ? "override" : "additive"}};
}

AttackScenario scenario_from_json(const json& j)
{
    AttackScenario sc;
    sc.kind = parse_attack_kind(j.at("kind").get<std::string>());
    sc.t_start = j.at("t_start").get<double>();
    sc.t_end = j.at("t_end").get<double>();
    sc.signal = signal_from_json(j.at("signal"));
    const std::string mode = j.value("mode", "additive");
    if (mode == "additive")
        sc.mode = ActuationMode::Additive;
    else if (mode == "override")
        sc.mode = ActuationMode::Override;
    else
        throw ConfigError("unknown actuation mode '" + mode + "'");
    return sc;
}

template <size_t N>
std::array<double, N> fixed(const json& j, const char* name)
{
    auto v = j.at(name).get<std::vector<double>>();
    if (v.size() != N)
        throw ConfigError(fmt::format("{} needs {} values, got {}", name, N, v.size()));
    std::array<double, N> a;
    std::copy(v.begin(), v.end(), a.begin());
    return a;
}

}  // namespace

int Timing::substeps() const
{
    double ratio = dt_sample / dt_sim;
    int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9 * ratio)
        throw ConfigError("timing: dt_sample must be an integer multiple of dt_sim");
    return n;
}

MonitorConfig RunConfig::monitor() const
{
    MonitorConfig m;
    m.window = window;
    m.rcond = rcond;
    m.eig_floor = eig_floor;
    m.input_scale = input_scale;
    m.threshold = detector.threshold;
    m.epsilon = isolator.epsilon;
    return m;
}

void RunConfig::use_scenario(const std::string& name)
{
    if (name == "none") {
        scenario.kind = AttackKind::None;
        return;
    }
    auto it = presets.find(name);
    if (it == presets.end())
        throw ConfigError("no scenario preset named '" + name + "'");
    scenario = it->second;
}

void RunConfig::validate() const
{
    battery.validate();
    window.validate();
    scenario.validate();
    if (!(timing.dt_sim > 0.0) || !(timing.dt_sample > 0.0) || !(timing.t_max > 0.0))
        throw ConfigError("timing values must be positive");
    timing.substeps();
    if (scenario.kind != AttackKind::None && !(timing.t_max > scenario.t_end))
        throw ConfigError("timing: t_max must exceed the attack end time");
    if (!(detector.threshold > 0.0))
        throw ConfigError("detector threshold must be positive");
    if (!(isolator.epsilon > 0.0))
        throw ConfigError("isolator epsilon must be positive");
    if (!(input_scale > 0.0))
        throw ConfigError("input_scale must be positive");
    if (!(charger.initial_soc >= 0.0 && charger.initial_soc < charger.soc_cutoff))
        throw ConfigError("charger: initial SOC must lie in [0, soc_cutoff)");
}

RunConfig default_config()
{
    RunConfig cfg;
    cfg.presets["actuation"] = preset(AttackKind::Actuation, -10.0);
    cfg.presets["sensor"] = preset(AttackKind::Sensor, -0.1);
    return cfg;
}

json to_json(const RunConfig& c)
{
    json ocv = json::array();
    for (const auto& [s, v] : c.battery.ocv_curve)
        ocv.push_back({s, v});
    json presets = json::object();
    for (const auto& [name, sc] : c.presets)
        presets[name] = scenario_to_json(sc);

    return {
        {"battery",
         {{"r1_coeffs", c.battery.r1_coeffs},
          {"r1_scale", c.battery.r1_scale},
          {"r2_coeffs", c.battery.r2_coeffs},
          {"c1_coeffs", c.battery.c1_coeffs},
          {"c2_coeffs", c.battery.c2_coeffs},
          {"capacity_ah", c.battery.capacity_ah},
          {"series_r", c.battery.series_r},
          {"ambient_t", c.battery.ambient_t},
          {"soc_abort", c.battery.soc_abort},
          {"ocv_curve", ocv}}},
        {"charger",
         {{"cc_current", c.charger.cc_current},
          {"v_max", c.charger.v_max},
          {"k_cv", c.charger.k_cv},
          {"i_limit", c.charger.i_limit},
          {"soc_cutoff", c.charger.soc_cutoff},
          {"initial_soc", c.charger.initial_soc}}},
        {"window",
         {{"W", c.window.W},
          {"W_tilde", c.window.W_tilde},
          {"tau", c.window.tau},
          {"rcond", c.rcond},
          {"eig_floor", c.eig_floor},
          {"input_scale", c.input_scale}}},
        {"detector",
         {{"threshold", c.detector.threshold}, {"margin", c.detector.margin}, {"floor", c.detector.floor}}},
        {"isolator",
         {{"epsilon", c.isolator.epsilon},
          {"margin", c.isolator.margin},
          {"calibration_current", c.isolator.calibration_current},
          {"calibration_window", {c.isolator.calibration_start, c.isolator.calibration_end}}}},
        {"scenario", scenario_to_json(c.scenario)},
        {"scenario_presets", presets},
        {"timing",
         {{"dt_sim", c.timing.dt_sim}, {"dt_sample", c.timing.dt_sample}, {"t_max", c.timing.t_max}}},
        {"seed", c.seed},
        {"output", {{"csv", c.output.csv}, {"report", c.output.report}}},
    };
}

RunConfig from_json(const json& j)
{
    try {
        RunConfig c;
        const json& b = j.at("battery");
        c.battery.r1_coeffs = fixed<3>(b, "r1_coeffs");
        c.battery.r1_scale = b.at("r1_scale").get<double>();
        c.battery.r2_coeffs = fixed<3>(b, "r2_coeffs");
        c.battery.c1_coeffs = fixed<6>(b, "c1_coeffs");
        c.battery.c2_coeffs = fixed<6>(b, "c2_coeffs");
        c.battery.capacity_ah = b.at("capacity_ah").get<double>();
        c.battery.series_r = b.at("series_r").get<double>();
        c.battery.ambient_t = b.at("ambient_t").get<double>();
        c.battery.soc_abort = b.at("soc_abort").get<double>();
        c.battery.ocv_curve.clear();
        for (const auto& p : b.at("ocv_curve"))
            c.battery.ocv_curve.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());

        const json& ch = j.at("charger");
        c.charger.cc_current = ch.at("cc_current").get<double>();
        c.charger.v_max = ch.at("v_max").get<double>();
        c.charger.k_cv = ch.at("k_cv").get<double>();
        c.charger.i_limit = ch.at("i_limit").get<double>();
        c.charger.soc_cutoff = ch.at("soc_cutoff").get<double>();
        c.charger.initial_soc = ch.at("initial_soc").get<double>();

        const json& w = j.at("window");
        c.window.W = w.at("W").get<int>();
        c.window.W_tilde = w.at("W_tilde").get<int>();
        c.window.tau = w.at("tau").get<int>();
        c.rcond = w.at("rcond").get<double>();
        c.eig_floor = w.at("eig_floor").get<double>();
        c.input_scale = w.at("input_scale").get<double>();

        const json& d = j.at("detector");
        c.detector.threshold = d.at("threshold").get<double>();
        c.detector.margin = d.at("margin").get<double>();
        c.detector.floor = d.at("floor").get<double>();

        const json& iso = j.at("isolator");
        c.isolator.epsilon = iso.at("epsilon").get<double>();
        c.isolator.margin = iso.at("margin").get<double>();
        c.isolator.calibration_current = iso.at("calibration_current").get<double>();
        c.isolator.calibration_start = iso.at("calibration_window").at(0).get<double>();
        c.isolator.calibration_end = iso.at("calibration_window").at(1).get<double>();

        c.scenario = scenario_from_json(j.at("scenario"));
        for (const auto& [name, sc] : j.at("scenario_presets").items())
            c.presets[name] = scenario_from_json(sc);

        const json& t = j.at("timing");
        c.timing.dt_sim = t.at("dt_sim").get<double>();
        c.timing.dt_sample = t.at("dt_sample").get<double>();
        c.timing.t_max = t.at("t_max").get<double>();

        c.seed = j.at("seed").get<std::uint64_t>();
        c.output.csv = j.at("output").at("csv").get<std::string>();
        c.output.report = j.at("output").at("report").get<std::string>();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::vector<std::string>& paths)
{
    json merged = to_json(default_config());
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file " + path);
        json patch;
        try {
            patch = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(fmt::format("{}: {}", path, e.what()));
        }
        merged.merge_patch(patch);
    }
    RunConfig cfg = from_json(merged);
    cfg.validate();
    return cfg;
}

}  // namespace koopguard
