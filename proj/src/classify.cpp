#include "robustface/classify.hpp"

#include <cmath>
#include <limits>

#include "robustface/errors.hpp"

namespace robustface {

std::vector<double> class_residuals(const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const Dictionary& dict,
                                    const Eigen::Ref<const Eigen::VectorXd>& a,
                                    const Eigen::Ref<const WeightVector>& w) {
  if (a.size() != dict.num_columns() || y.size() != dict.dimension() ||
      w.size() != dict.dimension()) {
    throw InvalidGeometry("class_residuals: result does not match the dictionary");
  }
  Eigen::VectorXd target = y;
  if (dict.has_variation()) {
    const ClassRange b = dict.variation_range();
    target -= dict.columns().middleCols(b.begin, b.size()) * a.segment(b.begin, b.size());
  }
  const Eigen::ArrayXd sqrt_w = w.array().sqrt();
  std::vector<double> out(static_cast<std::size_t>(dict.num_classes()));
  for (int c = 0; c < dict.num_classes(); ++c) {
    const ClassRange& r = dict.class_range(c);
    const Eigen::VectorXd residual =
        target - dict.class_block(c) * a.segment(r.begin, r.size());
    out[static_cast<std::size_t>(c)] = (sqrt_w * residual.array()).matrix().norm();
  }
  return out;
}

std::vector<double> class_residuals(const FaceVector& y, const Dictionary& dict,
                                    const SolveResult& result) {
  return class_residuals(y.values, dict, result.a, result.w);
}

ClassificationResult identify(const std::vector<double>& residuals) {
  if (residuals.empty()) throw DegenerateInput("identify: no classes");
  ClassificationResult out;
  out.residuals = residuals;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < residuals.size(); ++c) {
    const double r = residuals[c];
    if (r < best) {
      second = best;
      best = r;
      out.predicted = static_cast<int>(c);
    } else if (r < second) {
      second = r;
    }
  }
  out.margin = second - best;
  return out;
}

ClassificationResult identify(const FaceVector& y, const Dictionary& dict,
                              const SolveResult& result) {
  return identify(class_residuals(y, dict, result));
}

}  // namespace robustface
