#pragma once

#include <Eigen/Core>

#include "robustface/weights.hpp"

namespace robustface {

// Thin SVD M = U diag(sigma) V^T with sigma nonincreasing.
struct SvdFactors {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

// Throws NumericError if the input is not finite or the decomposition fails.
SvdFactors thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& m);

double nuclear_norm(const Eigen::Ref<const Eigen::MatrixXd>& m);

// Singular value soft-thresholding: U max(Sigma - tau, 0) V^T, the proximal
// map of tau * ||.||_*.
Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& m, double tau);

// r_i / (1 + 2 w_i / rho1): closed-form minimizer of the weighted quadratic
// error term against the shifted residual r.
Eigen::VectorXd shrink_weighted(const Eigen::Ref<const Eigen::VectorXd>& r,
                                const Eigen::Ref<const WeightVector>& w,
                                double rho1);

Eigen::VectorXd project_nonneg(const Eigen::Ref<const Eigen::VectorXd>& v);

// sign(v_i) max(|v_i| - tau, 0).
Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                               double tau);

}  // namespace robustface
