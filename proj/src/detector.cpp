#include "koopguard/detector.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "koopguard/errors.hpp"

namespace koopguard {

double residual(const Vec& y_meas, const Vec& y_pred)
{
    if (y_meas.size() != y_pred.size())
        throw ArgumentError("residual: dimension mismatch");
    return (y_meas - y_pred).norm();
}

double residual(double y_meas, double y_pred) { return std::abs(y_meas - y_pred); }

void update_flag(DetectorState& st, double r, double t)
{
    if (r > st.threshold) {
        if (!st.in_excursion) {
            st.in_excursion = true;
            st.flag = !st.flag;
            st.events.push_back({t, st.flag ? Edge::On : Edge::Off});
        }
    } else {
        st.in_excursion = false;
    }
}

double calibrate_detection(const std::vector<double>& nominal_residuals, double margin, double floor)
{
    if (nominal_residuals.empty())
        throw CalibrationError("detection calibration: no residual samples");
    if (!(margin > 0.0))
        throw CalibrationError("detection calibration: margin must be positive");
    double mx = *std::max_element(nominal_residuals.begin(), nominal_residuals.end());
    double thr = margin * mx;
    if (!(thr >= floor))
        throw CalibrationError(fmt::format("detection calibration: threshold {} below floor {}", thr, floor));
    return thr;
}

}  // namespace koopguard
