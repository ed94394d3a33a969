#include "koopguard/battery.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "koopguard/errors.hpp"

namespace koopguard {

namespace {

// Open-circuit voltage sampled every 0.01 SOC from a smooth monotone fit
// of a prismatic NMC cell: steep below 0.1, a plateau around 0.75-0.94,
// and a rise towards 4.2 V at full charge.
constexpr double kOcvTable[101] = {
    3.0000, 3.0728, 3.1404, 3.2016, 3.2552, 3.3000, 3.3385, 3.3735,
    3.4042, 3.4299, 3.4500, 3.4659, 3.4800, 3.4926, 3.5038, 3.5140,
    3.5235, 3.5326, 3.5415, 3.5505, 3.5600, 3.5695, 3.5787, 3.5875,
    3.5960, 3.6042, 3.6124, 3.6204, 3.6285, 3.6366, 3.6448, 3.6532,
    3.6618, 3.6708, 3.6802, 3.6900, 3.7003, 3.7110, 3.7222, 3.7336,
    3.7454, 3.7575, 3.7697, 3.7821, 3.7947, 3.8073, 3.8199, 3.8326,
    3.8452, 3.8577, 3.8700, 3.8823, 3.8948, 3.9074, 3.9200, 3.9327,
    3.9453, 3.9580, 3.9706, 3.9832, 3.9956, 4.0079, 4.0200, 4.0323,
    4.0448, 4.0573, 4.0692, 4.0802, 4.0900, 4.0994, 4.1086, 4.1160,
    4.1200, 4.1216, 4.1228, 4.1238, 4.1247, 4.1253, 4.1259, 4.1265,
    4.1270, 4.1275, 4.1280, 4.1283, 4.1287, 4.1290, 4.1293, 4.1297,
    4.1301, 4.1305, 4.1310, 4.1315, 4.1321, 4.1328, 4.1340, 4.1386,
    4.1476, 4.1580, 4.1696, 4.1838, 4.2000,
};

double quad(const double* c, double x) { return c[0] + c[1] * x + c[2] * x * x; }

}  // namespace

OcvCurve default_ocv_curve()
{
    OcvCurve curve;
    curve.reserve(101);
    for (int i = 0; i <= 100; ++i)
        curve.emplace_back(i / 100.0, kOcvTable[i]);
    return curve;
}

void BatteryParams::validate() const
{
    if (!(capacity_ah > 0.0))
        throw ConfigError("battery capacity must be positive");
    if (!(series_r >= 0.0))
        throw ConfigError("series resistance must be non-negative");
    if (!(r1_scale > 0.0))
        throw ConfigError("r1_scale must be positive");
    if (ocv_curve.size() < 2)
        throw ConfigError("OCV curve needs at least two points");
    for (size_t i = 1; i < ocv_curve.size(); ++i) {
        if (!(ocv_curve[i].first > ocv_curve[i - 1].first) ||
            !(ocv_curve[i].second > ocv_curve[i - 1].second))
            throw ConfigError(fmt::format("OCV curve not strictly increasing at point {}", i));
    }
    for (int i = 0; i <= 105; ++i)
        rc_params(i / 100.0, ambient_t, *this);
}

RcParams rc_params(double soc, double temperature, const BatteryParams& p)
{
    RcParams rc;
    rc.r1 = quad(p.r1_coeffs.data(), soc) * p.r1_scale;
    rc.r2 = quad(p.r2_coeffs.data(), soc);
    rc.c1 = quad(p.c1_coeffs.data(), soc) + temperature * quad(p.c1_coeffs.data() + 3, soc);
    rc.c2 = quad(p.c2_coeffs.data(), soc) + temperature * quad(p.c2_coeffs.data() + 3, soc);
    if (!(rc.r1 > 0.0 && rc.r2 > 0.0 && rc.c1 > 0.0 && rc.c2 > 0.0))
        throw ConfigError(fmt::format("non-positive RC parameter at soc={}", soc));
    return rc;
}

double ocv(double soc, const OcvCurve& curve)
{
    if (curve.empty())
        throw ConfigError("empty OCV curve");
    if (curve.size() == 1)
        return curve.front().second;

    auto it = std::upper_bound(curve.begin(), curve.end(), soc,
                               [](double s, const auto& pt) { return s < pt.first; });
    size_t hi;
    if (it == curve.begin())
        hi = 1;
    else if (it == curve.end())
        hi = curve.size() - 1;
    else
        hi = static_cast<size_t>(it - curve.begin());
    const auto& [x0, y0] = curve[hi - 1];
    const auto& [x1, y1] = curve[hi];
    return y0 + (soc - x0) * (y1 - y0) / (x1 - x0);
}

BatteryState battery_deriv(const BatteryState& s, double i_c, const BatteryParams& p)
{
    const RcParams rc = rc_params(s.soc, p.ambient_t, p);
    BatteryState d;
    d.v1 = -s.v1 / (rc.r1 * rc.c1) + i_c / rc.c1;
    d.v2 = -s.v2 / (rc.r2 * rc.c2) + i_c / rc.c2;
    d.soc = -i_c / p.capacity_coulomb();
    return d;
}

double terminal_voltage(const BatteryState& s, double i_c, const BatteryParams& p)
{
    return ocv(s.soc, p.ocv_curve) - i_c * p.series_r - s.v1 - s.v2;
}

BatteryState step(const BatteryState& s, double i_c, double dt, const BatteryParams& p)
{
    if (!(dt > 0.0))
        throw ArgumentError("step: dt must be positive");
    const RcParams rc = rc_params(s.soc, p.ambient_t, p);
    // exact for parameters frozen over the step, so the micro-second R1C1
    // branch needs no special treatment
    const double e1 = std::exp(-dt / (rc.r1 * rc.c1));
    const double e2 = std::exp(-dt / (rc.r2 * rc.c2));
    BatteryState n;
    n.v1 = s.v1 * e1 + rc.r1 * i_c * (1.0 - e1);
    n.v2 = s.v2 * e2 + rc.r2 * i_c * (1.0 - e2);
    n.soc = s.soc - i_c * dt / p.capacity_coulomb();
    if (n.soc > p.soc_abort)
        throw OverchargeAbort(fmt::format("SOC {:.4f} exceeded abort limit {}", n.soc, p.soc_abort));
    return n;
}

}  // namespace koopguard
