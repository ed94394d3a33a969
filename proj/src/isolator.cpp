#include "koopguard/isolator.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "koopguard/errors.hpp"

namespace koopguard {

CMat build_mode_regressor(const ModeSet& ms, int P)
{
    if (P < 1)
        throw ArgumentError("mode regressor: P must be positive");
    const Eigen::Index n = ms.eigenvalues.size();
    if (n == 0)
        throw IsolationUnavailable("mode regressor: no retained modes");
    const Eigen::Index q = static_cast<Eigen::Index>(ms.output_rows.size());

    CMat vy(q, n);
    for (Eigen::Index r = 0; r < q; ++r)
        vy.row(r) = ms.vectors.row(ms.output_rows[r]);

    CMat G(q * P, n);
    CVec pw = CVec::Ones(n);
    for (int j = 0; j < P; ++j) {
        pw = pw.cwiseProduct(ms.eigenvalues);
        G.middleRows(j * q, q) = vy * pw.asDiagonal();
    }
    return G;
}

CMat build_mode_regressor(const KoopmanModel& model, int P, double eig_floor)
{
    return build_mode_regressor(modes(model, eig_floor), P);
}

IsolationResult isolation_residual(const CMat& G, const Vec& r_stack, double rcond)
{
    if (G.rows() != r_stack.size())
        throw ArgumentError("isolation residual: G and residual stack differ in length");
    const double nr = r_stack.norm();
    if (!(nr > 0.0))
        throw ArgumentError("isolation residual: zero residual stack");

    CVec r = r_stack.cast<std::complex<double>>();
    CVec c = lstsq(G, r, rcond);
    double rI = (G * c - r).norm() / nr;

    IsolationResult out{std::clamp(rI, 0.0, 1.0), false};
    Eigen::JacobiSVD<CMat> svd(G);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rcond * s(0))
            ++rank;
    if (rank >= G.rows()) {
        out.uninformative = true;
        spdlog::warn("isolation uninformative: mode regressor has full row rank");
    }
    return out;
}

int classify(double r_I, double epsilon) { return r_I <= epsilon ? 1 : 2; }

double calibrate_isolation(const std::function<std::vector<double>(double)>& run_fn,
                           double u_max, double margin)
{
    std::vector<double> trace = run_fn(u_max);
    if (trace.empty())
        throw CalibrationError("isolation calibration: detector never fired under max-capacity attack");
    if (!(margin > 0.0))
        throw CalibrationError("isolation calibration: margin must be positive");
    return margin * *std::max_element(trace.begin(), trace.end());
}

}  // namespace koopguard
