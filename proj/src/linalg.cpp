#include "koopguard/linalg.hpp"

namespace koopguard {

namespace {

template <class M>
M pinv_impl(const M& a, double rcond)
{
    if (a.size() == 0)
        return M::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<M> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    M out = M::Zero(a.cols(), a.rows());
    if (smax == 0.0)
        return out;
    const double cut = rcond * smax;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) <= cut)
            break;
        out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
    }
    return out;
}

}  // namespace

Mat pinv(const Mat& m, double rcond) { return pinv_impl(m, rcond); }

CMat pinv(const CMat& m, double rcond) { return pinv_impl(m, rcond); }

Mat pinv_lstsq(const Mat& m, const Mat& rhs, double rcond)
{
    return rhs * pinv(m, rcond);
}

CVec lstsq(const CMat& g, const CVec& b, double rcond)
{
    return pinv(g, rcond) * b;
}

int effective_rank(const Mat& m, double rcond)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rcond * s(0))
            ++r;
    return r;
}

}  // namespace koopguard
