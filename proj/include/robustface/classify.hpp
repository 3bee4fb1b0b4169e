#pragma once

#include <vector>

#include <Eigen/Core>

#include "robustface/model.hpp"
#include "robustface/solver.hpp"

namespace robustface {

struct ClassificationResult {
  int predicted = 0;
  std::vector<double> residuals;  // one per class
  // Second-smallest minus smallest residual; +inf with a single class.
  double margin = 0.0;
};

// e_i(y) = || sqrt(W) (y - T_i a_i) ||_2 using only class-i columns and
// coefficients. With a variation block, B a_B is removed from y first.
// Throws InvalidGeometry if the result does not match the dictionary.
std::vector<double> class_residuals(const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const Dictionary& dict,
                                    const Eigen::Ref<const Eigen::VectorXd>& a,
                                    const Eigen::Ref<const WeightVector>& w);
std::vector<double> class_residuals(const FaceVector& y, const Dictionary& dict,
                                    const SolveResult& result);

// Argmin over class residuals; ties go to the lowest class id.
ClassificationResult identify(const std::vector<double>& residuals);
ClassificationResult identify(const FaceVector& y, const Dictionary& dict,
                              const SolveResult& result);

}  // namespace robustface
