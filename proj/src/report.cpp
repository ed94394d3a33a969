#include "koopguard/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace koopguard {

namespace {

std::string show(const std::optional<double>& v)
{
    return v ? fmt::format("{:.6g}", *v) : std::string("none");
}

nlohmann::json opt_json(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

Report summarize(const std::vector<RunRecord>& records, double soc_cutoff)
{
    Report rep;
    rep.samples = records.size();
    if (records.empty())
        return rep;

    for (const auto& r : records) {
        bool tampered = (r.u_applied && *r.u_applied != r.u_cmd) || (r.y_true && *r.y_true != r.y_meas);
        if (tampered) {
            rep.attack_start = r.t;
            break;
        }
    }

    int prev = 0;
    std::set<int> flags;
    for (const auto& r : records) {
        if (r.det_flag && !prev) {
            rep.intervals.push_back({r.t, std::nullopt, std::nullopt, std::nullopt, {}});
            flags.clear();
        } else if (!r.det_flag && prev) {
            rep.intervals.back().off = r.t;
        }
        if (r.det_flag) {
            auto& iv = rep.intervals.back();
            if (r.r_I) {
                iv.r_I_max = std::max(iv.r_I_max.value_or(*r.r_I), *r.r_I);
                iv.r_I_min = std::min(iv.r_I_min.value_or(*r.r_I), *r.r_I);
            }
            if (r.iso_flag && flags.insert(r.iso_flag).second)
                iv.iso_flags.push_back(r.iso_flag);
        }
        prev = r.det_flag;
    }

    if (rep.attack_start) {
        for (const auto& iv : rep.intervals) {
            if (iv.on >= *rep.attack_start) {
                rep.detection_latency = iv.on - *rep.attack_start;
                break;
            }
        }
    }

    // without tamper columns, fall back to the first flag as the end of nominal data
    std::optional<double> nominal_end = rep.attack_start;
    if (!nominal_end && !rep.intervals.empty())
        nominal_end = rep.intervals.front().on;
    for (const auto& r : records) {
        if (nominal_end && r.t >= *nominal_end)
            break;
        if (r.r_D)
            rep.max_nominal_residual = std::max(rep.max_nominal_residual.value_or(*r.r_D), *r.r_D);
    }

    for (const auto& r : records) {
        if (r.soc) {
            rep.final_soc = *r.soc;
            rep.max_soc = std::max(rep.max_soc.value_or(*r.soc), *r.soc);
        }
    }
    if (rep.max_soc)
        rep.overcharge = *rep.max_soc > soc_cutoff + 0.01;

    for (const auto& r : records) {
        if (r.u_cmd != records.front().u_cmd) {
            rep.cc_end = r.t;
            break;
        }
    }
    return rep;
}

std::string to_text(const Report& r)
{
    std::string s;
    s += fmt::format("samples: {}\n", r.samples);
    s += fmt::format("attack_start: {}\n", show(r.attack_start));
    s += fmt::format("detection_latency: {}\n", show(r.detection_latency));
    s += fmt::format("max_nominal_residual: {}\n", show(r.max_nominal_residual));
    s += fmt::format("final_soc: {}\n", show(r.final_soc));
    s += fmt::format("max_soc: {}\n", show(r.max_soc));
    s += fmt::format("overcharge: {}\n", r.overcharge ? (*r.overcharge ? "true" : "false") : "unknown");
    s += fmt::format("cc_end: {}\n", show(r.cc_end));
    s += fmt::format("flag_intervals: {}\n", r.intervals.size());
    for (const auto& iv : r.intervals) {
        s += fmt::format("  - on: {} off: {} r_I_max: {} r_I_min: {} iso_flags: [{}]\n", iv.on, show(iv.off),
                         show(iv.r_I_max), show(iv.r_I_min), fmt::join(iv.iso_flags, ","));
    }
    return s;
}

nlohmann::json to_json(const Report& r)
{
    nlohmann::json iv = nlohmann::json::array();
    for (const auto& i : r.intervals)
        iv.push_back({{"on", i.on},
                      {"off", opt_json(i.off)},
                      {"r_I_max", opt_json(i.r_I_max)},
                      {"r_I_min", opt_json(i.r_I_min)},
                      {"iso_flags", i.iso_flags}});
    return {{"samples", r.samples},
            {"attack_start", opt_json(r.attack_start)},
            {"detection_latency", opt_json(r.detection_latency)},
            {"flag_intervals", iv},
            {"max_nominal_residual", opt_json(r.max_nominal_residual)},
            {"final_soc", opt_json(r.final_soc)},
            {"max_soc", opt_json(r.max_soc)},
            {"overcharge", r.overcharge ? nlohmann::json(*r.overcharge) : nlohmann::json(nullptr)},
            {"cc_end", opt_json(r.cc_end)}};
}

}  // namespace koopguard
