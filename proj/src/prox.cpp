#include "robustface/prox.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/SVD>

#include "robustface/errors.hpp"

namespace robustface {

SvdFactors thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (!m.allFinite()) {
    throw NumericError("svd: input matrix has non-finite entries");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    const auto& s = svd.singularValues();
    std::ostringstream msg;
    msg << "svd did not converge on a " << m.rows() << "x" << m.cols()
        << " matrix (||M||_F = " << m.norm();
    if (s.size() > 0) {
      msg << ", sigma_max = " << s[0] << ", sigma_min = " << s[s.size() - 1];
    }
    msg << ")";
    throw NumericError(msg.str());
  }
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

double nuclear_norm(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (!m.allFinite()) throw NumericError("nuclear_norm: non-finite input");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

Eigen::MatrixXd svt(const Eigen::Ref<const Eigen::MatrixXd>& m, double tau) {
  if (!(tau >= 0.0)) throw ConfigError("svt: threshold must be nonnegative");
  const SvdFactors f = thin_svd(m);
  const Eigen::VectorXd shrunk = (f.sigma.array() - tau).max(0.0).matrix();
  Index rank = 0;
  while (rank < shrunk.size() && shrunk[rank] > 0.0) ++rank;
  if (rank == 0) return Eigen::MatrixXd::Zero(m.rows(), m.cols());
  return f.u.leftCols(rank) * shrunk.head(rank).asDiagonal() *
         f.v.leftCols(rank).transpose();
}

Eigen::VectorXd shrink_weighted(const Eigen::Ref<const Eigen::VectorXd>& r,
                                const Eigen::Ref<const WeightVector>& w,
                                double rho1) {
  if (!(rho1 > 0.0)) {
    throw ConfigError("shrink_weighted: rho1 must be positive, got " +
                      std::to_string(rho1));
  }
  if (r.size() != w.size()) {
    throw InvalidGeometry("shrink_weighted: residual and weights differ in length");
  }
  return (r.array() / (1.0 + (2.0 / rho1) * w.array())).matrix();
}

Eigen::VectorXd project_nonneg(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.cwiseMax(0.0);
}

Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& v,
                               double tau) {
  if (!(tau >= 0.0)) throw ConfigError("soft_threshold: tau must be nonnegative");
  Eigen::VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - tau;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

}  // namespace robustface
