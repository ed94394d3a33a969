#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "koopguard/detector.hpp"
#include "koopguard/koopman.hpp"

namespace koopguard {

struct MonitorConfig {
    WindowConfig window;
    double rcond = 1e-10;
    double eig_floor = 1e-8;
    // Inputs enter the regression as (u - u_last) / input_scale, where u_last
    // is the newest input of the learning window.
    double input_scale = 25.0;
    double threshold = 0.002;
    double epsilon = 0.12;
};

struct MonitorOutput {
    std::optional<double> y_pred;
    std::optional<double> r_D;
    int det_flag = 0;
    std::optional<double> r_I;
    int iso_flag = 0;
};

struct WindowReport {
    double t_start;  // first predicted sample
    double t_eval;   // sample at which the window was scored
    double r_I;
    int flag;
};

// Streams (y, u) samples through the sliding learn/predict windows.
//
// A window starting at sample s learns on [s-m, s-1] and predicts s..s+W_tilde-1;
// the next one starts at s+W_tilde-1, so consecutive windows share one sample
// and the newer prediction is the one reported. The first W samples are warm-up.
class Monitor {
public:
    explicit Monitor(const MonitorConfig& cfg);

    MonitorOutput push(double t, const Vec& y, const Vec& u);
    MonitorOutput push(double t, double y, double u);

    const DetectorState& detector() const { return det_; }
    const std::vector<WindowReport>& windows() const { return reports_; }
    const MonitorConfig& config() const { return cfg_; }

private:
    struct Active {
        KoopmanModel model;
        Vec d;
        Vec u_ref;
        double t_start = 0.0;
        int steps = 0;
        Vec resid;  // stacked q * W_tilde
        bool hot = false;
    };

    void open_window(double t);

    MonitorConfig cfg_;
    DetectorState det_;
    std::deque<Vec> ys_, us_;
    std::vector<Active> active_;
    std::vector<WindowReport> reports_;
    long n_ = 0;
    long next_start_;
    int iso_held_ = 0;
};

}  // namespace koopguard
