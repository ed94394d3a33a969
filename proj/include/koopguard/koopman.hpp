#pragma once

#include <vector>

#include "koopguard/linalg.hpp"

namespace koopguard {

struct WindowConfig {
    int W = 23;        // full sliding window
    int W_tilde = 8;   // prediction part
    int tau = 13;      // embedded delay
    int q = 1;
    int p = 1;

    int m() const { return W - W_tilde; }
    int columns() const { return m() - tau - 1; }
    int k() const { return (tau + 1) * q + tau * p; }
    void validate() const;
};

// Snapshots are columns. Each snapshot stacks [y_l, u_l, y_{l+1}, u_{l+1}, ..., y_{l+tau}].
struct DelayMatrices {
    Mat Yb;
    Mat Ys;
    Mat Ub;
    int q = 1;
    int p = 1;
    int tau = 0;
};

// Row offsets inside a snapshot.
inline int y_offset(int block, int q, int p) { return block * (q + p); }
inline int u_offset(int block, int q, int p) { return block * (q + p) + q; }

// y is q x m, u is p x m (one column per sample, 0-based).
DelayMatrices embed(const Mat& y, const Mat& u, int tau);

struct KoopmanModel {
    Mat A;
    Mat B;
    CVec eigenvalues;
    CMat modes;  // right eigenvectors, one column per eigenvalue
    int q = 1;
    int p = 1;
    int tau = 0;
    double fit_residual = 0.0;
    int rank = 0;
    bool eig_fallback = false;

    int dim() const { return static_cast<int>(A.rows()); }
    std::vector<int> output_rows() const;
};

KoopmanModel fit(const DelayMatrices& d, double rcond = 1e-10);

// One rollout step: A*d + B*u, then the input entries are shifted and the
// newest slot receives u.
Vec advance(const KoopmanModel& model, const Vec& d, const Vec& u);

// Rolls the surrogate forward `horizon` steps from d_last. u_future column j
// is the input applied on step j+1; the input entries inside the snapshot
// are overwritten with these known inputs after every step.
// Returns q x horizon.
Mat predict(const KoopmanModel& model, const Vec& d_last, const Mat& u_future, int horizon);

struct ModeSet {
    CVec eigenvalues;
    CMat vectors;  // unit 2-norm columns, full snapshot dimension
    std::vector<int> output_rows;
};

// Keeps modes with |lambda| > eig_floor. Throws IsolationUnavailable if none survive.
ModeSet modes(const KoopmanModel& model, double eig_floor = 1e-8);

}  // namespace koopguard
