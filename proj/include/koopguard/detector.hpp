#pragma once

#include <vector>

#include "koopguard/linalg.hpp"

namespace koopguard {

enum class Edge { On, Off };

struct FlagEvent {
    double t;
    Edge edge;
};

struct DetectorState {
    double threshold = 0.002;
    bool flag = false;
    bool in_excursion = false;
    std::vector<FlagEvent> events;
};

double residual(const Vec& y_meas, const Vec& y_pred);
double residual(double y_meas, double y_pred);

// Each excursion above threshold toggles the flag at its first sample.
void update_flag(DetectorState& st, double r, double t);

double calibrate_detection(const std::vector<double>& nominal_residuals, double margin,
                           double floor = 1e-6);

}  // namespace koopguard
