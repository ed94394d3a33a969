#pragma once

#include <array>
#include <utility>
#include <vector>

namespace koopguard {

// (soc, volts) pairs, strictly increasing in both coordinates.
using OcvCurve = std::vector<std::pair<double, double>>;

OcvCurve default_ocv_curve();

struct BatteryParams {
    // R1 coefficients are kept as printed (micro-ohm); r1_scale converts to ohms.
    std::array<double, 3> r1_coeffs{0.0701135, -0.043865, 0.023788};
    double r1_scale = 1e-6;
    std::array<double, 3> r2_coeffs{0.0288, -0.073, 0.0605};
    std::array<double, 6> c1_coeffs{335.4518, 3171.2, -1321.4, 53.2138, -65.4786, 244.3761};
    std::array<double, 6> c2_coeffs{31881.0, -115930.0, 104930.0, 60.3114, 10175.5, -9.5924};
    double capacity_ah = 5.0;
    double series_r = 0.0048;
    double ambient_t = 298.0;
    double soc_abort = 1.2;
    OcvCurve ocv_curve = default_ocv_curve();

    double capacity_coulomb() const { return capacity_ah * 3600.0; }
    // Throws ConfigError on any violated invariant.
    void validate() const;
};

struct BatteryState {
    double v1 = 0.0;
    double v2 = 0.0;
    double soc = 0.0;
};

struct RcParams {
    double r1, c1, r2, c2;
};

RcParams rc_params(double soc, double temperature, const BatteryParams& p);

double ocv(double soc, const OcvCurve& curve);

BatteryState battery_deriv(const BatteryState& s, double i_c, const BatteryParams& p);

// i_c < 0 charges the cell.
double terminal_voltage(const BatteryState& s, double i_c, const BatteryParams& p);

BatteryState step(const BatteryState& s, double i_c, double dt, const BatteryParams& p);

}  // namespace koopguard
