#pragma once

namespace koopguard {

enum class Phase { ConstantCurrent, ConstantVoltage, Done };

const char* phase_name(Phase p);

struct ChargerConfig {
    double cc_current = 5.0;  // magnitude, amps
    double v_max = 4.15;
    double k_cv = 2.0;        // A/(V*s)
    double i_limit = 25.0;
    double soc_cutoff = 0.94;
    double initial_soc = 0.35;
};

struct ChargerState {
    Phase phase = Phase::ConstantCurrent;
    double soc_estimate = 0.0;
    double i_cmd = 0.0;
};

// CCCV controller. The SOC estimate integrates the *commanded* current,
// so it drifts from the truth whenever the applied current is tampered with.
class Charger {
public:
    Charger(const ChargerConfig& cfg, double capacity_coulomb);

    // Returns the command for the next interval of length dt.
    double command(double v_meas, double dt);

    const ChargerState& state() const { return state_; }
    ChargerState& state() { return state_; }
    const ChargerConfig& config() const { return cfg_; }

private:
    ChargerConfig cfg_;
    double capacity_;
    ChargerState state_;
};

}  // namespace koopguard
