#pragma once

#include <cstdint>

#include "robustface/dataio.hpp"
#include "robustface/model.hpp"

namespace robustface {

// Desk-scale stand-in for a face database.
struct SyntheticSpec {
  int classes = 10;
  int per_class = 7;  // m: m-1 training images per class plus one held out
  ImageGeometry geometry{24, 21};
  // Number of test images; the c held-out samples come first, then fresh
  // draws cycling through the classes. Zero means exactly c.
  int test_images = 0;
  std::uint64_t seed = 1;
};

// Each class gets a smooth template (shared low-frequency component plus a
// class-specific cosine mixture). A sample is the template times a smooth
// illumination field with values in [0.6, 1.4], plus N(0, 0.02^2) noise,
// clipped to [0,1]. Templates are redrawn until every pair has Pearson
// correlation below 0.95. Throws ConfigError unless classes >= 2 and
// per_class >= 2.
Dataset make_synthetic_benchmark(const SyntheticSpec& spec);

double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b);

inline constexpr double kMaxTemplateCorrelation = 0.95;

}  // namespace robustface
