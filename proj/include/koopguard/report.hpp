#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "koopguard/runner.hpp"

namespace koopguard {

struct FlagInterval {
    double on;
    std::optional<double> off;  // empty if still flagged at the end of the trace
    std::optional<double> r_I_max;
    std::optional<double> r_I_min;
    std::vector<int> iso_flags;  // distinct isolation flags raised inside
};

struct Report {
    size_t samples = 0;
    std::optional<double> attack_start;  // inferred from u_applied != u_cmd or y_meas != y_true
    std::optional<double> detection_latency;
    std::vector<FlagInterval> intervals;
    std::optional<double> max_nominal_residual;  // before the attack, or before the first flag
    std::optional<double> final_soc;
    std::optional<double> max_soc;
    std::optional<bool> overcharge;
    std::optional<double> cc_end;  // first change of the commanded current
};

Report summarize(const std::vector<RunRecord>& records, double soc_cutoff = 0.94);

std::string to_text(const Report& r);
nlohmann::json to_json(const Report& r);

}  // namespace koopguard
