#include <gtest/gtest.h>

#include <random>

#include "koopguard/errors.hpp"
#include "koopguard/isolator.hpp"

using namespace koopguard;

namespace {

ModeSet scalar_modes(std::vector<std::complex<double>> lambdas, std::vector<std::complex<double>> vy)
{
    ModeSet ms;
    const Eigen::Index n = lambdas.size();
    ms.eigenvalues = Eigen::Map<CVec>(lambdas.data(), n);
    ms.vectors = CMat(1, n);
    for (Eigen::Index i = 0; i < n; ++i)
        ms.vectors(0, i) = vy[i];
    ms.output_rows = {0};
    return ms;
}

}  // namespace

TEST(ModeRegressor, GeometricColumn)
{
    CMat G = build_mode_regressor(scalar_modes({0.5}, {1.0}), 2);
    ASSERT_EQ(G.rows(), 2);
    EXPECT_EQ(G(0, 0), std::complex<double>(0.5));
    EXPECT_EQ(G(1, 0), std::complex<double>(0.25));
}

TEST(ModeRegressor, ConstantMode)
{
    CMat G = build_mode_regressor(scalar_modes({1.0}, {1.0}), 3);
    EXPECT_TRUE(G.isApprox(CMat::Ones(3, 1)));
}

TEST(ModeRegressor, DistinctModesGiveFullColumnRank)
{
    for (int P : {2, 3, 8}) {
        CMat G = build_mode_regressor(scalar_modes({0.9, 0.1}, {1.0, 1.0}), P);
        Eigen::JacobiSVD<CMat> svd(G);
        EXPECT_GT(svd.singularValues()(1), 1e-3) << "P=" << P;
    }
}

TEST(ModeRegressor, EmptyModes)
{
    ModeSet ms;
    ms.output_rows = {0};
    EXPECT_THROW(build_mode_regressor(ms, 4), IsolationUnavailable);
}

TEST(IsolationResidual, RepresentableResidualIsZero)
{
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    // conjugate pair plus a real mode keeps G c real for conjugate coefficients
    std::complex<double> lam(0.6, 0.3);
    CMat G = build_mode_regressor(scalar_modes({lam, std::conj(lam), 0.8}, {{0.3, 0.2}, {0.3, -0.2}, 1.0}), 8);
    std::complex<double> c0(g(rng), g(rng));
    CVec c(3);
    c << c0, std::conj(c0), g(rng);
    CVec r = G * c;
    ASSERT_LT(r.imag().norm(), 1e-12);
    IsolationResult ir = isolation_residual(G, r.real());
    EXPECT_LE(ir.r_I, 1e-8);
    EXPECT_EQ(classify(ir.r_I, 0.12), 1);
}

TEST(IsolationResidual, OrthogonalComplementIsOne)
{
    CMat G = build_mode_regressor(scalar_modes({0.9, 0.5}, {1.0, -0.7}), 6);
    // G real here; complement through a full QR of G
    Mat Gr = G.real();
    Eigen::HouseholderQR<Mat> qr(Gr);
    Mat Q = qr.householderQ() * Mat::Identity(6, 6);
    Vec r = Q.col(4) + 0.5 * Q.col(5);
    IsolationResult ir = isolation_residual(G, r);
    EXPECT_NEAR(ir.r_I, 1.0, 1e-12);
    EXPECT_EQ(classify(ir.r_I, 0.12), 2);
}

TEST(IsolationResidual, FullRowRankIsUninformative)
{
    CMat G = build_mode_regressor(scalar_modes({0.9, 0.5, -0.3}, {1.0, 1.0, 1.0}), 3);
    IsolationResult ir = isolation_residual(G, Vec::Random(3));
    EXPECT_LT(ir.r_I, 1e-10);
    EXPECT_TRUE(ir.uninformative);
}

TEST(IsolationResidual, ZeroStackRejected)
{
    CMat G = build_mode_regressor(scalar_modes({0.5}, {1.0}), 4);
    EXPECT_THROW(isolation_residual(G, Vec::Zero(4)), ArgumentError);
}

TEST(IsolationResidual, BoundedInUnitInterval)
{
    std::mt19937 rng(8);
    std::normal_distribution<double> g;
    for (int k = 0; k < 200; ++k) {
        std::complex<double> lam(0.9 * std::tanh(g(rng)), 0.3 * std::tanh(g(rng)));
        CMat G = build_mode_regressor(scalar_modes({lam, std::conj(lam)}, {{g(rng), g(rng)}, {g(rng), g(rng)}}), 8);
        Vec r = Vec::NullaryExpr(8, [&] { return g(rng); });
        double ri = isolation_residual(G, r).r_I;
        EXPECT_GE(ri, 0.0);
        EXPECT_LE(ri, 1.0);
    }
}

TEST(Classify, Rule)
{
    EXPECT_EQ(classify(0.05, 0.12), 1);
    EXPECT_EQ(classify(0.5, 0.12), 2);
    EXPECT_EQ(classify(0.12, 0.12), 1);
}

TEST(CalibrateIsolation, MarginAndGuard)
{
    auto trace = [](double) { return std::vector<double>{0.03, 0.08, 0.05}; };
    EXPECT_EQ(calibrate_isolation(trace, -25.0, 1.0), 0.08);
    EXPECT_NEAR(calibrate_isolation(trace, -25.0, 1.5), 0.12, 1e-15);
    auto empty = [](double) { return std::vector<double>{}; };
    EXPECT_THROW(calibrate_isolation(empty, -25.0, 1.1), CalibrationError);
}

TEST(CalibrateIsolation, PassesMaxCapacity)
{
    double seen = 0.0;
    auto trace = [&](double u) {
        seen = u;
        return std::vector<double>{0.1};
    };
    calibrate_isolation(trace, -25.0, 1.1);
    EXPECT_EQ(seen, -25.0);
}
