#pragma once

#include <functional>
#include <vector>

#include "koopguard/koopman.hpp"

namespace koopguard {

// Block row j (1..P) is V_y * diag(lambda_i^j).
CMat build_mode_regressor(const ModeSet& ms, int P);
CMat build_mode_regressor(const KoopmanModel& model, int P, double eig_floor = 1e-8);

struct IsolationResult {
    double r_I;
    bool uninformative;  // G has full row rank, any residual fits exactly
};

// Normalised misfit of r_stack to the column space of G.
IsolationResult isolation_residual(const CMat& G, const Vec& r_stack, double rcond = 1e-10);

// 1 = actuation, 2 = sensor.
int classify(double r_I, double epsilon);

// run_fn(u_max) runs a max-capacity actuation attack and returns its r_I trace.
double calibrate_isolation(const std::function<std::vector<double>(double)>& run_fn,
                           double u_max, double margin);

}  // namespace koopguard
