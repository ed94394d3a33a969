#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "koopguard/config.hpp"
#include "koopguard/detector.hpp"
#include "koopguard/monitor.hpp"

namespace koopguard {

struct RunRecord {
    double t = 0.0;
    std::optional<double> y_true;
    double y_meas = 0.0;
    std::optional<double> y_pred;
    double u_cmd = 0.0;
    std::optional<double> u_applied;
    std::optional<double> soc;
    std::optional<double> r_D;
    int det_flag = 0;
    std::optional<double> r_I;
    int iso_flag = 0;
};

struct RunResult {
    std::vector<RunRecord> records;
    std::vector<FlagEvent> events;
    std::vector<WindowReport> windows;
    int saturated_samples = 0;
};

// Closed loop: measure, command, tamper, monitor, integrate.
RunResult run_scenario(const RunConfig& cfg);

struct Frame {
    double t;
    double y;
    double u;
};

// Replays logged (t, y, u) through the same monitor.
RunResult detect_offline(const std::vector<Frame>& frames, const RunConfig& cfg);

// r_I of every scored window while flagged.
std::vector<double> isolation_trace(const RunResult& r);

// Returns a config overlay holding the calibrated value.
nlohmann::json calibrate(const RunConfig& cfg, const std::string& which);

}  // namespace koopguard
