#pragma once

#include <Eigen/Dense>

namespace koopguard {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Moore-Penrose pseudo-inverse; singular values below rcond * sigma_max are dropped.
Mat pinv(const Mat& m, double rcond);
CMat pinv(const CMat& m, double rcond);

// Minimum-norm X minimising ||rhs - X * m||_F, i.e. X = rhs * pinv(m).
Mat pinv_lstsq(const Mat& m, const Mat& rhs, double rcond);

// Minimum-norm c minimising ||g * c - b||_2.
CVec lstsq(const CMat& g, const CVec& b, double rcond);

// Numerical rank with the same relative cutoff as pinv.
int effective_rank(const Mat& m, double rcond);

}  // namespace koopguard
