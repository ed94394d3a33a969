#include "koopguard/charger.hpp"

#include <algorithm>

#include "koopguard/errors.hpp"

namespace koopguard {

const char* phase_name(Phase p)
{
    switch (p) {
    case Phase::ConstantCurrent: return "CC";
    case Phase::ConstantVoltage: return "CV";
    case Phase::Done: return "done";
    }
    return "?";
}

Charger::Charger(const ChargerConfig& cfg, double capacity_coulomb)
    : cfg_(cfg), capacity_(capacity_coulomb)
{
    if (!(capacity_ > 0.0))
        throw ConfigError("charger: capacity must be positive");
    if (!(cfg_.i_limit > 0.0) || !(cfg_.cc_current > 0.0) || cfg_.cc_current > cfg_.i_limit)
        throw ConfigError("charger: need 0 < cc_current <= i_limit");
    state_.soc_estimate = cfg_.initial_soc;
    state_.i_cmd = -cfg_.cc_current;
}

double Charger::command(double v_meas, double dt)
{
    if (state_.phase == Phase::Done)
        return 0.0;

    if (state_.phase == Phase::ConstantCurrent) {
        if (v_meas >= cfg_.v_max)
            state_.phase = Phase::ConstantVoltage;
        else
            state_.i_cmd = -cfg_.cc_current;
    }
    if (state_.phase == Phase::ConstantVoltage) {
        state_.i_cmd += cfg_.k_cv * (v_meas - cfg_.v_max) * dt;
        state_.i_cmd = std::clamp(state_.i_cmd, -cfg_.i_limit, 0.0);
    }
    if (state_.soc_estimate >= cfg_.soc_cutoff) {
        state_.phase = Phase::Done;
        state_.i_cmd = 0.0;
        return 0.0;
    }
    state_.soc_estimate -= state_.i_cmd * dt / capacity_;
    return state_.i_cmd;
}

}  // namespace koopguard
