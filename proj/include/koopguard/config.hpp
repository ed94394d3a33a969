#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "koopguard/attack.hpp"
#include "koopguard/battery.hpp"
#include "koopguard/charger.hpp"
#include "koopguard/monitor.hpp"

namespace koopguard {

struct DetectorConfig {
    double threshold = 0.002;
    double margin = 2.0;
    double floor = 1e-6;
};

struct IsolatorConfig {
    double epsilon = 0.12;
    double margin = 1.1;
    double calibration_current = -25.0;
    double calibration_start = 700.0;
    double calibration_end = 1000.0;
};

struct Timing {
    double dt_sim = 0.1;
    double dt_sample = 1.0;
    double t_max = 3600.0;

    int substeps() const;
};

struct OutputConfig {
    std::string csv = "run.csv";
    std::string report;
};

struct RunConfig {
    BatteryParams battery;
    ChargerConfig charger;
    WindowConfig window;
    double rcond = 1e-10;
    double eig_floor = 1e-8;
    double input_scale = 25.0;
    DetectorConfig detector;
    IsolatorConfig isolator;
    AttackScenario scenario;
    std::map<std::string, AttackScenario> presets;
    Timing timing;
    std::uint64_t seed = 7;
    OutputConfig output;

    MonitorConfig monitor() const;
    // Selects "none" or a named preset as the active scenario.
    void use_scenario(const std::string& name);
    void validate() const;
};

RunConfig default_config();

nlohmann::json to_json(const RunConfig& cfg);
RunConfig from_json(const nlohmann::json& j);

// Later files patch earlier ones (RFC 7386 merge) on top of the defaults.
RunConfig load_config(const std::vector<std::string>& paths);

}  // namespace koopguard
