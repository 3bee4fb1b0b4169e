#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <Eigen/Cholesky>

#include "oracle.hpp"
#include "problems.hpp"
#include "robustface/classify.hpp"
#include "robustface/corruptions.hpp"
#include "robustface/errors.hpp"
#include "robustface/prox.hpp"
#include "robustface/solver.hpp"
#include "robustface/synthetic.hpp"

using namespace robustface;
using testing_support::random_problem;

namespace {

AdmmState random_state(Index d, Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  AdmmState s = AdmmState::initial(d, n);
  for (Index i = 0; i < n; ++i) {
    s.a[i] = rng.normal();
    s.z[i] = rng.uniform01();
    s.u2[i] = 0.1 * rng.normal();
  }
  for (Index i = 0; i < d; ++i) {
    s.e[i] = 0.1 * rng.normal();
    s.u1[i] = 0.1 * rng.normal();
    s.w[i] = rng.uniform(0.01, 1.0);
  }
  return s;
}

// Dictionary whose columns are standard basis vectors of R^6.
Dictionary orthonormal_dictionary() {
  const ImageGeometry g(3, 2);
  std::vector<FaceVector> images;
  for (Index j = 0; j < 3; ++j) images.emplace_back(Eigen::VectorXd::Unit(6, 2 * j), g);
  const std::vector<int> labels{0, 1, 2};
  return build_dictionary(images, labels);
}

SolverConfig tight(SolverConfig c) {
  c.eps1 = 1e-12;
  c.eps2 = 1e-12;
  c.s_max = 200000;
  return c;
}

double simpson_phi(double x, const WeightFunction& wf, int panels = 20000) {
  const double b = std::abs(x);
  if (b == 0.0) return 0.0;
  const double h = b / panels;
  auto f = [&](double s) { return s * weight_value(s, wf); };
  double sum = f(0.0) + f(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST(SolverConfig, DefaultsAndValidation) {
  const SolverConfig c;
  EXPECT_EQ(c.lambda_star, 0.05);
  EXPECT_EQ(c.rho1, 1.0);
  EXPECT_EQ(c.rho2, 0.1);
  EXPECT_EQ(c.eps1, 1e-2);
  EXPECT_EQ(c.eps2, 1e-1);
  EXPECT_EQ(c.eps3, 1e-2);
  EXPECT_EQ(c.t_max, 100);
  EXPECT_EQ(c.s_max, 500);
  EXPECT_DOUBLE_EQ(c.ridge(), 0.1);
  SolverConfig bad = c;
  bad.rho1 = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.lambda_star = -1.0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = c;
  bad.trace_objective = true;  // adaptive weights have no fixed objective
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Methods, ParseAndPresets) {
  EXPECT_EQ(parse_method("F-LR-IRNNLS"), Method::f_lr_irnnls);
  EXPECT_EQ(parse_method("f_irnnls"), Method::f_irnnls);
  EXPECT_EQ(parse_method("cr-rls"), Method::cr_rls);
  EXPECT_EQ(parse_method("LR3"), Method::lr3);
  EXPECT_THROW(parse_method("IRLS-2"), ConfigError);
  for (const auto m : {Method::f_lr_irnnls, Method::f_irnnls, Method::f_irls, Method::f_irsc,
                       Method::f_lr_irls, Method::f_lr_irsc, Method::src, Method::cr_rls,
                       Method::lr3}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  const SolverConfig cr = method_config(Method::cr_rls);
  EXPECT_EQ(cr.t_max, 1);
  EXPECT_EQ(cr.regularizer, Regularizer::l2);
  EXPECT_FALSE(cr.low_rank);
  EXPECT_EQ(cr.weight.kind, WeightKind::constant_one);
  const SolverConfig lr = method_config(Method::f_lr_irsc);
  EXPECT_EQ(lr.regularizer, Regularizer::l1);
  EXPECT_TRUE(lr.low_rank);
  EXPECT_EQ(lr.weight.kind, WeightKind::logistic);
  EXPECT_DOUBLE_EQ(method_config(Method::f_irls).ridge(), 2e-3);
}

TEST(GramCache, IdentityAndSingleColumn) {
  const GramCache eye(Eigen::MatrixXd::Identity(5, 5), 0.25);
  EXPECT_LE((eye.matrix() - Eigen::MatrixXd::Identity(5, 5) / 1.25).norm(), 1e-14);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 1);
  t(2, 0) = 1.0;
  const GramCache one(t, 0.1);
  EXPECT_NEAR(one.matrix()(0, 0), 1.0 / 1.1, 1e-15);
}

TEST(GramCache, InvertsRegularizedGram) {
  SplitMix64 rng(31);
  Eigen::MatrixXd t(20, 8);
  for (Index i = 0; i < t.size(); ++i) t.data()[i] = rng.normal();
  const GramCache cache = precompute_gram(t, 0.1);
  const Eigen::MatrixXd g = t.transpose() * t + 0.1 * Eigen::MatrixXd::Identity(8, 8);
  EXPECT_LE((cache.matrix() * g - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-8);
  for (int k = 0; k < 5; ++k) {
    Eigen::VectorXd b(8);
    for (Index i = 0; i < 8; ++i) b[i] = rng.normal();
    EXPECT_LE((g * cache.apply(b) - b).norm(), 1e-8 * b.norm());
  }
}

TEST(GramCache, CountsFactorizations) {
  const auto before = inversion_count();
  const GramCache a(Eigen::MatrixXd::Identity(3, 3), 1.0);
  const GramCache b(Eigen::MatrixXd::Identity(3, 3), 1.0);
  EXPECT_EQ(inversion_count() - before, 2u);
}

TEST(EUpdate, ZeroLambdaMatchesFastPath) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 41);
  const AdmmState s = random_state(30, 10, 42);
  SolverConfig on;
  on.lambda_star = 0.0;
  SolverConfig off = on;
  off.low_rank = false;
  const Eigen::VectorXd a = e_update(s, p.y, p.t, p.geometry, on);
  const Eigen::VectorXd b = e_update(s, p.y, p.t, p.geometry, off);
  EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EUpdate, NegligibleWeightsReturnShiftedResidual) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 43);
  AdmmState s = random_state(30, 10, 44);
  s.w.setConstant(1e-30);
  SolverConfig c;
  c.lambda_star = 0.0;
  c.rho1 = 2.0;
  const Eigen::VectorXd expected = p.y - p.t * s.a + s.u1 / c.rho1;
  EXPECT_LE((e_update(s, p.y, p.t, p.geometry, c) - expected).norm(), 1e-12);
}

TEST(EUpdate, LowRankPathReducesNuclearNorm) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 45);
  const AdmmState s = random_state(30, 10, 46);
  SolverConfig c;
  c.lambda_star = 0.2;
  const Eigen::VectorXd e = e_update(s, p.y, p.t, p.geometry, c);
  const Eigen::VectorXd shrunk = shrink_weighted(p.y - p.t * s.a + s.u1 / c.rho1, s.w, c.rho1);
  EXPECT_LE(nuclear_norm(matricize(e, p.geometry)), nuclear_norm(matricize(shrunk, p.geometry)));
  EXPECT_LE((e - vectorize(svt(matricize(shrunk, p.geometry), 0.2)).values).norm(), 1e-12);
}

TEST(ZUpdate, Variants) {
  AdmmState s = AdmmState::initial(4, 2);
  s.a = Eigen::Vector2d(0.2, -0.1);
  s.u2.setZero();
  SolverConfig c;
  EXPECT_EQ(z_update(s, c), Eigen::Vector2d(0.2, 0.0));
  c.regularizer = Regularizer::l1;
  c.lambda_reg = 0.0;
  s.u2 = Eigen::Vector2d(0.1, 0.1);
  EXPECT_LE((z_update(s, c) - (s.a + s.u2 / c.rho2)).norm(), 1e-15);
  c.lambda_reg = 0.05;
  EXPECT_LE((z_update(s, c) - soft_threshold(s.a + s.u2 / c.rho2, 0.5)).norm(), 1e-15);
}

TEST(AUpdate, ZeroRightHandSide) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 51);
  AdmmState s = AdmmState::initial(20, 6);
  s.e = p.y;
  s.z.setZero();
  const SolverConfig c;
  const GramCache cache(p.t, c.ridge());
  EXPECT_LE(a_update(s, p.y, p.t, cache, c).norm(), 1e-15);
}

TEST(AUpdate, OrthonormalClosedForm) {
  const Eigen::MatrixXd t = Eigen::MatrixXd::Identity(6, 3);
  const AdmmState s = random_state(6, 3, 52);
  SolverConfig c;
  c.rho1 = 2.0;
  c.rho2 = 0.5;
  const double r = c.rho2 / c.rho1;
  const GramCache cache(t, r);
  Eigen::VectorXd y(6);
  y << 1, 2, 3, 4, 5, 6;
  const Eigen::VectorXd expected =
      (t.transpose() * (y - s.e + s.u1 / c.rho1) + r * s.z - s.u2 / c.rho1) / (1.0 + r);
  EXPECT_LE((a_update(s, y, t, cache, c) - expected).norm(), 1e-14);
}

TEST(AUpdate, SatisfiesNormalEquations) {
  const auto p = random_problem(ImageGeometry(8, 5), 12, 53);
  const AdmmState s = random_state(40, 12, 54);
  const SolverConfig c;
  const GramCache cache(p.t, c.ridge());
  const Eigen::VectorXd a = a_update(s, p.y, p.t, cache, c);
  // Stationarity of the augmented Lagrangian in a.
  const Eigen::VectorXd grad = -p.t.transpose() * (c.rho1 * (p.y - p.t * a - s.e) + s.u1) +
                               c.rho2 * (a - s.z) + s.u2;
  EXPECT_LE(grad.norm(), 1e-8);
}

TEST(AUpdate, RidgeMismatchThrows) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 55);
  const AdmmState s = AdmmState::initial(20, 6);
  const GramCache cache(p.t, 0.3);
  EXPECT_THROW(a_update(s, p.y, p.t, cache, SolverConfig{}), ConfigError);
}

TEST(DualUpdate, FeasibleStateKeepsDuals) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 56);
  AdmmState s = random_state(20, 6, 57);
  s.z = s.a;
  s.e = p.y - p.t * s.a;
  const Eigen::VectorXd u1 = s.u1;
  const Eigen::VectorXd u2 = s.u2;
  dual_update(s, p.y, p.t, SolverConfig{});
  EXPECT_LE((s.u1 - u1).norm(), 1e-15);
  EXPECT_LE((s.u2 - u2).norm(), 1e-15);
}

TEST(DualUpdate, OneStepFromZero) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 58);
  AdmmState s = random_state(20, 6, 59);
  s.u1.setZero();
  s.u2.setZero();
  SolverConfig c;
  c.rho1 = 3.0;
  dual_update(s, p.y, p.t, c);
  EXPECT_LE((s.u1 - 3.0 * (p.y - p.t * s.a - s.e)).norm(), 1e-14);
  EXPECT_LE((s.u2 - c.rho2 * (s.a - s.z)).norm(), 1e-14);
}

TEST(CodingStep, ReconstructsConsistentSystem) {
  const auto p = random_problem(ImageGeometry(6, 5), 8, 61, 0.0);
  const Eigen::VectorXd y = p.t * p.a_true;
  SolverConfig base;
  base.lambda_star = 0.0;
  const SolverConfig c = method_config(Method::f_irnnls, base);
  const GramCache cache(p.t, c.ridge());
  SolverConfig unit = tight(c);
  unit.weight = WeightFunction::constant_one();
  const auto res = coding_step(y, p.t, p.geometry, WeightVector::Ones(30), cache, unit);
  EXPECT_TRUE(res.converged);
  EXPECT_LE((y - p.t * res.a).norm(), 1e-6);
}

TEST(CodingStep, ConvergedStateMeetsTolerances) {
  const auto p = random_problem(ImageGeometry(6, 5), 8, 62);
  const SolverConfig c = method_config(Method::f_lr_irnnls);
  const GramCache cache(p.t, c.ridge());
  AdmmState s = AdmmState::initial(30, 8);
  s.w = weight_update(p.y - p.t * s.a, c.weight);
  Eigen::VectorXd u1_before;
  Eigen::VectorXd last_increment;
  const auto res = coding_step(s, p.y, p.t, p.geometry, cache, c, [&](const AdmmState& st) {
    if (u1_before.size() > 0) last_increment = st.u1 - u1_before;
    u1_before = st.u1;
  });
  ASSERT_TRUE(res.converged);
  EXPECT_LE((p.y - p.t * s.a - s.e).norm(), c.eps1);
  EXPECT_LE((s.a - s.z).norm(), c.eps2);
  EXPECT_LE(last_increment.norm(), c.rho1 * c.eps1 + 1e-12);
}

TEST(CodingStep, ReportsNonConvergence) {
  const auto p = random_problem(ImageGeometry(6, 5), 8, 63);
  SolverConfig c = method_config(Method::f_lr_irnnls);
  c.s_max = 1;
  c.eps1 = 1e-14;
  const GramCache cache(p.t, c.ridge());
  const auto res = coding_step(p.y, p.t, p.geometry, WeightVector::Ones(30), cache, c);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_TRUE(res.a.allFinite());
}

TEST(CodingStep, ZeroLambdaMatchesFastPathIterates) {
  const auto p = random_problem(ImageGeometry(6, 5), 8, 64);
  SolverConfig on;
  on.lambda_star = 0.0;
  SolverConfig off = on;
  off.low_rank = false;
  const GramCache cache(p.t, on.ridge());
  std::vector<Eigen::VectorXd> a_on;
  std::vector<Eigen::VectorXd> a_off;
  AdmmState s1 = AdmmState::initial(30, 8);
  AdmmState s2 = AdmmState::initial(30, 8);
  s1.w = s2.w = weight_update(p.y - p.t * s1.a, on.weight);
  coding_step(s1, p.y, p.t, p.geometry, cache, on, [&](const AdmmState& s) { a_on.push_back(s.a); });
  coding_step(s2, p.y, p.t, p.geometry, cache, off, [&](const AdmmState& s) { a_off.push_back(s.a); });
  ASSERT_EQ(a_on.size(), a_off.size());
  for (std::size_t i = 0; i < a_on.size(); ++i) EXPECT_LE((a_on[i] - a_off[i]).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Solve, OccludedFacesWeightsSettle) {
  SyntheticSpec spec;
  spec.seed = 7;
  spec.test_images = 20;
  const Dataset data = make_synthetic_benchmark(spec);
  const Dictionary dict = build_dictionary(data.train, data.train_labels);
  const FaceVector patch = make_texture_patch(ImageGeometry(32, 32), 3);
  SolverConfig base;
  base.weight = WeightFunction::logistic(0.6);
  const SolverConfig c = method_config(Method::f_lr_irnnls, base);
  int settled = 0;
  for (std::size_t i = 0; i < data.test.size(); ++i) {
    const auto occluded = occlude_block(data.test[i], patch, 0.3, 100 + i);
    const FaceVector y(normalize_unit_l2(occluded.image.values), occluded.image.geometry);
    const SolveResult res = solve(y, dict, c);
    EXPECT_LE(res.outer_iterations, 100);
    EXPECT_EQ(static_cast<int>(res.inner_iterations.size()), res.outer_iterations);
    EXPECT_TRUE((res.z.array() >= 0.0).all());
    if (res.converged) {
      ++settled;
      EXPECT_LT(res.weight_change.back(), c.eps3);
    }
  }
  // Loose inner tolerances leave a few solves cycling just above eps3.
  EXPECT_GE(settled, 18);
}

TEST(Solve, Deterministic) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 71);
  const SolverConfig c = method_config(Method::f_lr_irnnls);
  const GramCache cache(p.t, c.ridge());
  const auto a = solve(p.y, p.t, p.geometry, cache, c);
  const auto b = solve(p.y, p.t, p.geometry, cache, c);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.inner_iterations, b.inner_iterations);
}

TEST(Solve, GeometryMismatchThrows) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 72);
  const SolverConfig c;
  const GramCache cache(p.t, c.ridge());
  EXPECT_THROW(solve(p.y, p.t, ImageGeometry(5, 5), cache, c), InvalidGeometry);
}

TEST(Solve, SingleRegularizedLeastSquaresStep) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 73);
  SolverConfig c = tight(SolverConfig{});
  c.t_max = 1;
  c.weight = WeightFunction::constant_one();
  c.lambda_star = 0.0;
  c.regularizer = Regularizer::l2;
  c.lambda_reg = 0.01;
  const GramCache cache(p.t, c.ridge());
  const auto res = solve(p.y, p.t, p.geometry, cache, c);
  EXPECT_EQ(res.outer_iterations, 1);
  const Eigen::MatrixXd g = p.t.transpose() * p.t + 0.01 * Eigen::MatrixXd::Identity(10, 10);
  const Eigen::VectorXd expected = g.ldlt().solve(p.t.transpose() * p.y);
  EXPECT_LE((res.a - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Baselines, CrRlsOrthonormalClosedForm) {
  const Dictionary dict = orthonormal_dictionary();
  Eigen::VectorXd v(6);
  v << 0.5, 0.1, -0.3, 0.2, 0.7, 0.4;
  const FaceVector y(v.normalized(), dict.geometry());
  const double lambda_reg = 0.2;
  const auto res = solve_baseline(Baseline::cr_rls, y, dict, lambda_reg, 0.0, tight(SolverConfig{}));
  const Eigen::VectorXd expected = dict.columns().transpose() * y.values / (1.0 + lambda_reg);
  EXPECT_LE((res.a - expected).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(res.outer_iterations, 1);
}

TEST(Baselines, SrcOverPenalizedIsZero) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 74);
  std::vector<FaceVector> images;
  std::vector<int> labels;
  for (Index j = 0; j < 10; ++j) {
    images.emplace_back(p.t.col(j), p.geometry);
    labels.push_back(static_cast<int>(j / 2));
  }
  const Dictionary dict = build_dictionary(images, labels);
  const FaceVector y(p.y.normalized(), p.geometry);
  const auto res = solve_baseline(Baseline::src, y, dict, 1e6, 0.0);
  EXPECT_TRUE(res.z.isZero(0.0));
  EXPECT_LE(res.a.norm(), SolverConfig{}.eps2);
}

TEST(Baselines, Lr3WithoutNuclearTermMatchesCrRls) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 75);
  std::vector<FaceVector> images;
  std::vector<int> labels;
  for (Index j = 0; j < 10; ++j) {
    images.emplace_back(p.t.col(j), p.geometry);
    labels.push_back(static_cast<int>(j / 5));
  }
  const Dictionary dict = build_dictionary(images, labels);
  const FaceVector y(p.y.normalized(), p.geometry);
  const SolverConfig base = tight(SolverConfig{});
  const auto lr3 = solve_baseline(Baseline::lr3, y, dict, 0.01, 0.0, base);
  const auto cr = solve_baseline(Baseline::cr_rls, y, dict, 0.01, 0.0, base);
  EXPECT_LE((lr3.a - cr.a).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Objective, ZeroAtExactFit) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 81, 0.0);
  SolverConfig c;
  c.weight = WeightFunction::logistic_frozen({2.0, 0.5});
  const auto j = objective_value(p.a_true, p.t * p.a_true, p.t, p.geometry, c);
  EXPECT_TRUE(j.feasible);
  EXPECT_NEAR(j.value, 0.0, 1e-12);
}

TEST(Objective, InfeasibleForNegativeCoefficients) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 82);
  SolverConfig c;
  c.weight = WeightFunction::logistic_frozen({2.0, 0.5});
  Eigen::VectorXd a = Eigen::VectorXd::Constant(6, 0.1);
  a[2] = -1e-3;
  const auto j = objective_value(a, p.y, p.t, p.geometry, c);
  EXPECT_FALSE(j.feasible);
  EXPECT_TRUE(std::isinf(j.value));
}

TEST(Objective, RidgeLeastSquares) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 83);
  SolverConfig c;
  c.weight = WeightFunction::constant_one();
  c.lambda_star = 0.0;
  c.regularizer = Regularizer::l2;
  c.lambda_reg = 0.3;
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(6, -1, 1);
  const double expected = 0.5 * (p.y - p.t * a).squaredNorm() + 0.3 * a.squaredNorm();
  EXPECT_NEAR(objective_value(a, p.y, p.t, p.geometry, c).value, expected, 1e-12);
}

TEST(Objective, MatchesQuadratureAndSvdOracle) {
  const auto p = random_problem(ImageGeometry(10, 8), 12, 84);
  SolverConfig c;
  c.weight = WeightFunction::logistic_frozen(logistic_params(p.y, 0.8, 8.0));
  c.lambda_star = 0.05;
  c.regularizer = Regularizer::l1;
  c.lambda_reg = 0.02;
  Eigen::VectorXd a = Eigen::VectorXd::Constant(12, 0.05);
  a[0] = -0.2;
  const Eigen::VectorXd r = p.y - p.t * a;
  double data = 0.0;
  for (Index i = 0; i < r.size(); ++i) data += simpson_phi(r[i], c.weight);
  const auto svd = oracle::jacobi_svd(testing_support::to_oracle(Eigen::MatrixXd(matricize(r, p.geometry))));
  double nuclear = 0.0;
  for (const double s : svd.sigma) nuclear += s;
  const double expected = data + 0.05 * nuclear + 0.02 * a.lpNorm<1>();
  const double got = objective_value(a, p.y, p.t, p.geometry, c).value;
  EXPECT_NEAR(got, expected, 1e-6 * std::abs(expected));
}

TEST(Objective, AdaptiveWeightsUnsupported) {
  const auto p = random_problem(ImageGeometry(5, 4), 6, 85);
  EXPECT_THROW(objective_value(Eigen::VectorXd::Zero(6), p.y, p.t, p.geometry, SolverConfig{}),
               Unsupported);
}

TEST(Objective, TraceStartsAtInitialPoint) {
  const auto p = random_problem(ImageGeometry(6, 5), 10, 86);
  SolverConfig base = tight(SolverConfig{});
  base.s_max = 20000;
  base.eps1 = base.eps2 = 1e-8;
  base.weight = WeightFunction::logistic_frozen(logistic_params(p.y, 0.8, 8.0));
  base.trace_objective = true;
  const SolverConfig c = method_config(Method::f_irnnls, base);
  const GramCache cache(p.t, c.ridge());
  const auto res = solve(p.y, p.t, p.geometry, cache, c);
  ASSERT_EQ(res.objective_trace.size(), static_cast<std::size_t>(res.outer_iterations) + 1);
  EXPECT_DOUBLE_EQ(res.objective_trace.front(),
                   objective_value(Eigen::VectorXd::Constant(10, 0.1), p.y, p.t, p.geometry, c).value);
  for (std::size_t i = 0; i + 1 < res.objective_trace.size(); ++i) {
    EXPECT_LE(res.objective_trace[i + 1], res.objective_trace[i] + 1e-9);
  }
}
