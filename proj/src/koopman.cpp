#include "koopguard/koopman.hpp"

#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "koopguard/errors.hpp"

namespace koopguard {

namespace {

constexpr double kEigCondLimit = 1e12;

double condition(const CMat& v)
{
    Eigen::JacobiSVD<CMat> svd(v);
    const auto& s = svd.singularValues();
    if (s.size() == 0)
        return 1.0;
    double lo = s(s.size() - 1);
    return lo > 0.0 ? s(0) / lo : INFINITY;
}

// Null vector of (A - lambda I), one eigenvalue at a time.
CMat eigvecs_by_nullspace(const Mat& a, const CVec& lambda)
{
    const Eigen::Index n = a.rows();
    CMat out(n, lambda.size());
    CMat ac = a.cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        CMat shifted = ac - lambda(i) * CMat::Identity(n, n);
        Eigen::JacobiSVD<CMat> svd(shifted, Eigen::ComputeFullV);
        out.col(i) = svd.matrixV().col(n - 1);
    }
    return out;
}

}  // namespace

void WindowConfig::validate() const
{
    if (q < 1 || p < 1)
        throw ConfigError("window: q and p must be at least 1");
    if (W_tilde < 1 || W <= W_tilde)
        throw ConfigError("window: need W > W_tilde >= 1");
    if (tau < 0)
        throw ConfigError("window: tau must be non-negative");
    if (columns() < 1)
        throw ConfigError(fmt::format("window: m - tau - 1 = {} leaves no regression column", columns()));
}

DelayMatrices embed(const Mat& y, const Mat& u, int tau)
{
    if (tau < 0)
        throw ArgumentError("embed: negative tau");
    if (y.cols() != u.cols())
        throw ArgumentError("embed: y and u lengths differ");
    const int m = static_cast<int>(y.cols());
    const int q = static_cast<int>(y.rows());
    const int p = static_cast<int>(u.rows());
    const int cols = m - tau - 1;
    if (cols < 1)
        throw WindowUnderflow(fmt::format("embed: {} samples, need at least {}", m, tau + 2));

    const int k = (tau + 1) * q + tau * p;
    DelayMatrices d;
    d.q = q;
    d.p = p;
    d.tau = tau;
    d.Yb.resize(k, cols);
    d.Ys.resize(k, cols);
    d.Ub.resize(p, cols);

    auto snapshot = [&](int l, Eigen::Ref<Vec> out) {
        for (int i = 0; i <= tau; ++i) {
            out.segment(y_offset(i, q, p), q) = y.col(l + i);
            if (i < tau)
                out.segment(u_offset(i, q, p), p) = u.col(l + i);
        }
    };
    for (int j = 0; j < cols; ++j) {
        snapshot(j, d.Yb.col(j));
        snapshot(j + 1, d.Ys.col(j));
        d.Ub.col(j) = u.col(j + tau);
    }
    return d;
}

std::vector<int> KoopmanModel::output_rows() const
{
    std::vector<int> rows;
    for (int i = 0; i < q; ++i)
        rows.push_back(y_offset(tau, q, p) + i);
    return rows;
}

KoopmanModel fit(const DelayMatrices& d, double rcond)
{
    if (!d.Yb.allFinite() || !d.Ys.allFinite() || !d.Ub.allFinite())
        throw FitError("fit: non-finite data");
    const Eigen::Index k = d.Yb.rows();
    const Eigen::Index p = d.Ub.rows();

    Mat ups(k + p, d.Yb.cols());
    ups << d.Yb, d.Ub;
    Mat lambda = pinv_lstsq(ups, d.Ys, rcond);

    KoopmanModel model;
    model.q = d.q;
    model.p = d.p;
    model.tau = d.tau;
    model.A = lambda.leftCols(k);
    model.B = lambda.rightCols(p);
    model.fit_residual = (d.Ys - lambda * ups).norm();
    model.rank = effective_rank(ups, rcond);

    Eigen::EigenSolver<Mat> es(model.A);
    if (es.info() != Eigen::Success)
        throw FitError("fit: eigendecomposition failed");
    model.eigenvalues = es.eigenvalues();
    model.modes = es.eigenvectors();
    if (!(condition(model.modes) <= kEigCondLimit)) {
        model.modes = eigvecs_by_nullspace(model.A, model.eigenvalues);
        model.eig_fallback = true;
        spdlog::debug("fit: ill-conditioned eigenbasis, using per-eigenvalue null vectors");
    }
    return model;
}

Vec advance(const KoopmanModel& model, const Vec& d, const Vec& u)
{
    const int q = model.q, p = model.p, tau = model.tau;
    Vec next = model.A * d + model.B * u;
    // inputs are measured, not predicted: shift the true ones in
    for (int i = 0; i + 1 < tau; ++i)
        next.segment(u_offset(i, q, p), p) = d.segment(u_offset(i + 1, q, p), p);
    if (tau > 0)
        next.segment(u_offset(tau - 1, q, p), p) = u;
    return next;
}

Mat predict(const KoopmanModel& model, const Vec& d_last, const Mat& u_future, int horizon)
{
    if (horizon < 0 || horizon > u_future.cols())
        throw ArgumentError(fmt::format("predict: horizon {} but {} future inputs", horizon, u_future.cols()));
    if (d_last.size() != model.dim())
        throw ArgumentError("predict: snapshot dimension mismatch");
    if (u_future.rows() != model.p)
        throw ArgumentError("predict: input dimension mismatch");

    Vec d = d_last;
    Mat out(model.q, horizon);
    for (int j = 0; j < horizon; ++j) {
        d = advance(model, d, u_future.col(j));
        out.col(j) = d.segment(y_offset(model.tau, model.q, model.p), model.q);
    }
    return out;
}

ModeSet modes(const KoopmanModel& model, double eig_floor)
{
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i)
        if (std::abs(model.eigenvalues(i)) > eig_floor)
            keep.push_back(i);
    if (keep.empty())
        throw IsolationUnavailable("no Koopman mode above the eigenvalue floor");

    ModeSet ms;
    ms.eigenvalues.resize(keep.size());
    ms.vectors.resize(model.dim(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j) {
        ms.eigenvalues(j) = model.eigenvalues(keep[j]);
        ms.vectors.col(j) = model.modes.col(keep[j]).normalized();
    }
    ms.output_rows = model.output_rows();
    return ms;
}

}  // namespace koopguard
