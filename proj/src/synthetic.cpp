#include "robustface/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "robustface/errors.hpp"
#include "robustface/rng.hpp"

namespace robustface {

namespace {

constexpr std::uint64_t kSharedStream = 1;
constexpr std::uint64_t kTemplateStream = 2;
constexpr std::uint64_t kSampleStream = 3;

// Sum of low-frequency cosines on the unit square, integer frequencies 0..3.
Eigen::VectorXd cosine_mixture(const ImageGeometry& g, SplitMix64& rng, int terms) {
  struct Term {
    double fx, fy, phase, amp;
  };
  std::vector<Term> mix(static_cast<std::size_t>(terms));
  for (auto& t : mix) {
    t.fx = static_cast<double>(rng.uniform_index(4));
    t.fy = static_cast<double>(rng.uniform_index(4));
    t.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    t.amp = rng.uniform(0.5, 1.0);
  }
  Eigen::VectorXd v(g.size());
  for (Index c = 0; c < g.cols; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(g.cols);
    for (Index r = 0; r < g.rows; ++r) {
      const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(g.rows);
      double s = 0.0;
      for (const auto& t : mix) {
        s += t.amp * std::cos(std::numbers::pi * (t.fx * x + t.fy * y) + t.phase);
      }
      v[c * g.rows + r] = s;
    }
  }
  return v;
}

Eigen::VectorXd standardize(const Eigen::VectorXd& v) {
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().mean());
  return (v.array() - mean) / std::max(sd, 1e-12);
}

FaceVector draw_sample(const Eigen::VectorXd& tmpl, const ImageGeometry& g,
                       SplitMix64& rng) {
  const double level = rng.uniform(0.8, 1.2);
  const double gx = rng.uniform(-0.4, 0.4);
  const double gy = rng.uniform(-0.4, 0.4);
  Eigen::VectorXd v(g.size());
  for (Index c = 0; c < g.cols; ++c) {
    const double x = (static_cast<double>(c) + 0.5) / static_cast<double>(g.cols) - 0.5;
    for (Index r = 0; r < g.rows; ++r) {
      const double y = (static_cast<double>(r) + 0.5) / static_cast<double>(g.rows) - 0.5;
      const double illum = std::clamp(level + gx * x + gy * y, 0.6, 1.4);
      const Index i = c * g.rows + r;
      v[i] = std::clamp(tmpl[i] * illum + 0.02 * rng.normal(), 0.0, 1.0);
    }
  }
  return {std::move(v), g};
}

}  // namespace

double pearson_correlation(const Eigen::Ref<const Eigen::VectorXd>& a,
                           const Eigen::Ref<const Eigen::VectorXd>& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double denom = std::sqrt(da.square().sum() * db.square().sum());
  return denom > 0.0 ? (da * db).sum() / denom : 0.0;
}

Dataset make_synthetic_benchmark(const SyntheticSpec& spec) {
  if (spec.classes < 2 || spec.per_class < 2) {
    throw ConfigError("synthetic benchmark needs at least 2 classes and 2 samples per class");
  }
  const ImageGeometry g(spec.geometry.rows, spec.geometry.cols);
  const auto c = static_cast<std::size_t>(spec.classes);

  SplitMix64 shared_rng(derive_seed(spec.seed, kSharedStream));
  const Eigen::VectorXd shared = standardize(cosine_mixture(g, shared_rng, 4));

  SplitMix64 template_rng(derive_seed(spec.seed, kTemplateStream));
  std::vector<Eigen::VectorXd> templates;
  templates.reserve(c);
  while (templates.size() < c) {
    const Eigen::VectorXd own = standardize(cosine_mixture(g, template_rng, 6));
    Eigen::VectorXd t = 0.5 + 0.13 * (0.6 * shared + 0.8 * own).array();
    t = t.cwiseMax(0.05).cwiseMin(0.95);
    const bool distinct = std::all_of(templates.begin(), templates.end(), [&](const auto& o) {
      return pearson_correlation(t, o) < kMaxTemplateCorrelation;
    });
    if (distinct) templates.push_back(std::move(t));
  }

  Dataset ds;
  ds.geometry = g;
  for (std::size_t k = 0; k < c; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "c%03zu", k);
    ds.class_names.emplace_back(name);
  }
  SplitMix64 sample_rng(derive_seed(spec.seed, kSampleStream));
  std::vector<FaceVector> held_out;
  for (std::size_t k = 0; k < c; ++k) {
    for (int i = 0; i < spec.per_class; ++i) {
      FaceVector sample = draw_sample(templates[k], g, sample_rng);
      if (i + 1 < spec.per_class) {
        ds.train.push_back(std::move(sample));
        ds.train_labels.push_back(static_cast<int>(k));
      } else {
        held_out.push_back(std::move(sample));
      }
    }
  }
  const std::size_t n_test =
      spec.test_images > 0 ? static_cast<std::size_t>(spec.test_images) : c;
  for (std::size_t i = 0; i < n_test; ++i) {
    const std::size_t k = i % c;
    ds.test.push_back(i < c ? held_out[k] : draw_sample(templates[k], g, sample_rng));
    ds.test_labels.push_back(static_cast<int>(k));
    char id[32];
    std::snprintf(id, sizeof id, "t%04zu_c%03zu", i, k);
    ds.test_ids.emplace_back(id);
  }
  return ds;
}

}  // namespace robustface
