#include "robustface/solver.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Cholesky>

#include "robustface/errors.hpp"
#include "robustface/prox.hpp"

namespace robustface {

namespace {

std::atomic<std::uint64_t> g_inversions{0};

struct MethodEntry {
  Method method;
  std::string_view name;
};

constexpr std::array<MethodEntry, 9> kMethods{{
    {Method::f_lr_irnnls, "F-LR-IRNNLS"},
    {Method::f_irnnls, "F-IRNNLS"},
    {Method::f_irls, "F-IRLS"},
    {Method::f_irsc, "F-IRSC"},
    {Method::f_lr_irls, "F-LR-IRLS"},
    {Method::f_lr_irsc, "F-LR-IRSC"},
    {Method::src, "SRC"},
    {Method::cr_rls, "CR-RLS"},
    {Method::lr3, "LR3"},
}};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return out;
}

}  // namespace

double SolverConfig::ridge() const {
  return regularizer == Regularizer::l2 ? 2.0 * lambda_reg / rho1 : rho2 / rho1;
}

void SolverConfig::validate() const {
  if (!(rho1 > 0.0)) throw ConfigError("rho1 must be positive");
  if (regularizer != Regularizer::l2 && !(rho2 > 0.0)) {
    throw ConfigError("rho2 must be positive");
  }
  if (!(lambda_star >= 0.0)) throw ConfigError("lambda_star must be nonnegative");
  if (!(lambda_reg >= 0.0)) throw ConfigError("lambda_reg must be nonnegative");
  if (regularizer == Regularizer::l2 && !(lambda_reg > 0.0)) {
    throw ConfigError("the l2 regularizer needs lambda_reg > 0");
  }
  if (!(eps1 > 0.0 && eps2 > 0.0 && eps3 > 0.0)) {
    throw ConfigError("tolerances eps1, eps2, eps3 must be positive");
  }
  if (t_max < 1 || s_max < 1) throw ConfigError("iteration caps must be >= 1");
  weight.validate();
  if (trace_objective && !weight.is_fixed()) {
    throw ConfigError("objective tracing needs a frozen weight function");
  }
}

Method parse_method(std::string_view name) {
  const std::string key = upper(name);
  for (const auto& entry : kMethods) {
    if (key == entry.name) return entry.method;
  }
  if (key == "LR^3" || key == "LR-3") return Method::lr3;
  if (key == "CRRLS") return Method::cr_rls;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method method) {
  for (const auto& entry : kMethods) {
    if (entry.method == method) return entry.name;
  }
  return "?";
}

SolverConfig method_config(Method method, const SolverConfig& base) {
  SolverConfig c = base;
  const bool robust = method != Method::src && method != Method::cr_rls &&
                      method != Method::lr3;
  if (robust) {
    if (c.weight.kind == WeightKind::constant_one) {
      c.weight = WeightFunction::logistic(base.weight.gamma, base.weight.zeta);
    }
  } else {
    c.weight = WeightFunction::constant_one();
  }
  switch (method) {
    case Method::f_lr_irnnls:
      c.regularizer = Regularizer::nonneg;
      c.low_rank = true;
      break;
    case Method::f_irnnls:
      c.regularizer = Regularizer::nonneg;
      c.low_rank = false;
      break;
    case Method::f_irls:
      c.regularizer = Regularizer::l2;
      c.low_rank = false;
      break;
    case Method::f_irsc:
      c.regularizer = Regularizer::l1;
      c.low_rank = false;
      break;
    case Method::f_lr_irls:
      c.regularizer = Regularizer::l2;
      c.low_rank = true;
      break;
    case Method::f_lr_irsc:
      c.regularizer = Regularizer::l1;
      c.low_rank = true;
      break;
    case Method::src:
      c.regularizer = Regularizer::l1;
      c.low_rank = false;
      break;
    case Method::cr_rls:
      c.regularizer = Regularizer::l2;
      c.low_rank = false;
      c.t_max = 1;
      break;
    case Method::lr3:
      c.regularizer = Regularizer::l2;
      c.low_rank = true;
      break;
  }
  return c;
}

AdmmState AdmmState::initial(Index d, Index n) {
  AdmmState s;
  s.a = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  s.z = s.a;
  s.e = Eigen::VectorXd::Zero(d);
  s.u1 = Eigen::VectorXd::Zero(d);
  s.u2 = Eigen::VectorXd::Zero(n);
  s.w = WeightVector::Ones(d);
  return s;
}

GramCache::GramCache(const Eigen::Ref<const Eigen::MatrixXd>& t, double ridge)
    : ridge_(ridge) {
  if (!(ridge > 0.0)) {
    throw ConfigError("GramCache: ridge term must be positive, got " +
                      std::to_string(ridge));
  }
  const Index n = t.cols();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(n, n) * ridge;
  gram.selfadjointView<Eigen::Lower>().rankUpdate(t.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericError("GramCache: normal matrix is not positive definite");
  }
  p_ = llt.solve(Eigen::MatrixXd::Identity(n, n));
  ++g_inversions;
}

GramCache precompute_gram(const Eigen::Ref<const Eigen::MatrixXd>& t,
                          double ridge) {
  return GramCache(t, ridge);
}

std::uint64_t inversion_count() { return g_inversions.load(); }

namespace {

void check_cache(const GramCache& cache, const SolverConfig& config, Index n) {
  const double want = config.ridge();
  if (cache.size() != n ||
      std::abs(cache.ridge() - want) > 1e-12 * std::max(1.0, std::abs(want))) {
    throw ConfigError("GramCache was built for ridge " +
                      std::to_string(cache.ridge()) + " but the config needs " +
                      std::to_string(want));
  }
}

// e-update given the current reconstruction ta = T a_s.
Eigen::VectorXd e_update_from(const AdmmState& state,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              const Eigen::VectorXd& ta,
                              const ImageGeometry& geometry,
                              const SolverConfig& config) {
  const Eigen::VectorXd shifted = y - ta + state.u1 / config.rho1;
  Eigen::VectorXd e_tilde = shrink_weighted(shifted, state.w, config.rho1);
  if (!config.low_rank) return e_tilde;
  const Eigen::MatrixXd low_rank =
      svt(matricize(e_tilde, geometry), config.lambda_star / config.rho1);
  return Eigen::Map<const Eigen::VectorXd>(low_rank.data(), low_rank.size());
}

void dual_update_from(AdmmState& state,
                      const Eigen::Ref<const Eigen::VectorXd>& y,
                      const Eigen::VectorXd& ta, const SolverConfig& config) {
  state.u1 += config.rho1 * (y - ta - state.e);
  if (config.regularizer != Regularizer::l2) {
    state.u2 += config.rho2 * (state.a - state.z);
  }
}

}  // namespace

Eigen::VectorXd e_update(const AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry,
                         const SolverConfig& config) {
  const Eigen::VectorXd ta = t * state.a;
  return e_update_from(state, y, ta, geometry, config);
}

Eigen::VectorXd z_update(const AdmmState& state, const SolverConfig& config) {
  switch (config.regularizer) {
    case Regularizer::nonneg:
      return project_nonneg(state.a + state.u2 / config.rho2);
    case Regularizer::l1:
      return soft_threshold(state.a + state.u2 / config.rho2,
                            config.lambda_reg / config.rho2);
    case Regularizer::l2:
      // No split variable: z tracks a so that a - z is identically zero.
      return state.a;
  }
  return state.a;
}

Eigen::VectorXd a_update(const AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const GramCache& cache, const SolverConfig& config) {
  check_cache(cache, config, t.cols());
  Eigen::VectorXd rhs = t.transpose() * (y - state.e + state.u1 / config.rho1);
  if (config.regularizer != Regularizer::l2) {
    rhs += (config.rho2 / config.rho1) * state.z - state.u2 / config.rho1;
  }
  return cache.apply(rhs);
}

void dual_update(AdmmState& state, const Eigen::Ref<const Eigen::VectorXd>& y,
                 const Eigen::Ref<const Eigen::MatrixXd>& t,
                 const SolverConfig& config) {
  const Eigen::VectorXd ta = t * state.a;
  dual_update_from(state, y, ta, config);
}

CodingResult coding_step(AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry, const GramCache& cache,
                         const SolverConfig& config,
                         const IterationObserver& observer) {
  const Index d = t.rows();
  const Index n = t.cols();
  if (y.size() != d || state.a.size() != n || state.w.size() != d ||
      geometry.size() != d) {
    throw InvalidGeometry("coding_step: dimensions of y, T, a, w disagree");
  }
  check_cache(cache, config, n);
  const bool split = config.regularizer != Regularizer::l2;

  if (!config.warm_start_duals || state.u1.size() != d) {
    state.u1 = Eigen::VectorXd::Zero(d);
  }
  if (!config.warm_start_duals || state.u2.size() != n) {
    state.u2 = Eigen::VectorXd::Zero(n);
  }
  if (state.z.size() != n) state.z = state.a;
  state.s = 0;

  Eigen::VectorXd ta = t * state.a;
  AdmmState best;
  double best_score = std::numeric_limits<double>::infinity();
  CodingResult result;

  for (int s = 1; s <= config.s_max; ++s) {
    state.s = s;
    state.e = e_update_from(state, y, ta, geometry, config);
    state.z = z_update(state, config);
    {
      Eigen::VectorXd rhs = t.transpose() * (y - state.e + state.u1 / config.rho1);
      if (split) {
        rhs += (config.rho2 / config.rho1) * state.z - state.u2 / config.rho1;
      }
      state.a = cache.apply(rhs);
    }
    if (!split) state.z = state.a;
    ta.noalias() = t * state.a;
    dual_update_from(state, y, ta, config);

    const double r1 = (y - ta - state.e).norm();
    const double r2 = split ? (state.a - state.z).norm() : 0.0;
    if (!std::isfinite(r1) || !std::isfinite(r2)) {
      throw NumericError("coding_step: iterate diverged at inner step " +
                         std::to_string(s));
    }
    if (observer) observer(state);

    result.iterations = s;
    if (r1 <= config.eps1 && r2 <= config.eps2) {
      result.converged = true;
      result.primal_residual = r1;
      result.coupling_residual = r2;
      result.a = state.a;
      return result;
    }
    const double score = std::max(r1 / config.eps1, r2 / config.eps2);
    if (score < best_score) {
      best_score = score;
      best = state;
      result.primal_residual = r1;
      result.coupling_residual = r2;
    }
  }
  best.s = state.s;
  state = std::move(best);
  result.a = state.a;
  return result;
}

CodingResult coding_step(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry,
                         const Eigen::Ref<const WeightVector>& w,
                         const GramCache& cache, const SolverConfig& config) {
  AdmmState state = AdmmState::initial(t.rows(), t.cols());
  state.w = w;
  return coding_step(state, y, t, geometry, cache, config);
}

ObjectiveValue objective_value(const Eigen::Ref<const Eigen::VectorXd>& a,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const Eigen::Ref<const Eigen::MatrixXd>& t,
                               const ImageGeometry& geometry,
                               const SolverConfig& config) {
  if (!config.weight.is_fixed()) {
    throw Unsupported("objective_value needs a frozen weight function");
  }
  const Eigen::VectorXd r = y - t * a;
  ObjectiveValue out;
  for (Index i = 0; i < r.size(); ++i) out.data_term += phi_value(r[i], config.weight);
  const double lambda_star = config.effective_lambda_star();
  if (lambda_star > 0.0) {
    out.nuclear_term = lambda_star * nuclear_norm(matricize(r, geometry));
  }
  switch (config.regularizer) {
    case Regularizer::nonneg:
      out.feasible = (a.array() >= 0.0).all();
      break;
    case Regularizer::l1:
      out.regularizer_term = config.lambda_reg * a.lpNorm<1>();
      break;
    case Regularizer::l2:
      out.regularizer_term = config.lambda_reg * a.squaredNorm();
      break;
  }
  out.value = out.feasible
                  ? out.data_term + out.nuclear_term + out.regularizer_term
                  : std::numeric_limits<double>::infinity();
  return out;
}

SolveResult solve(const Eigen::Ref<const Eigen::VectorXd>& y,
                  const Eigen::Ref<const Eigen::MatrixXd>& t,
                  const ImageGeometry& geometry, const GramCache& cache,
                  const SolverConfig& config, const IterationObserver& observer) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Index d = t.rows();
  const Index n = t.cols();
  if (y.size() != d || geometry.size() != d) {
    throw InvalidGeometry("solve: y, T and geometry disagree in dimension");
  }
  check_cache(cache, config, n);

  SolveResult result;
  AdmmState state = AdmmState::initial(d, n);
  auto trace = [&] {
    // z carries the regularizer exactly; a only up to the coupling residual.
    const bool split = config.regularizer != Regularizer::l2 && state.z.size() == n;
    const ObjectiveValue j =
        objective_value(split ? state.z : state.a, y, t, geometry, config);
    if (j.feasible && !std::isfinite(j.value)) {
      throw NumericError("solve: objective is not finite");
    }
    result.objective_trace.push_back(j.value);
  };
  if (config.trace_objective) trace();

  WeightVector previous;
  for (int outer = 1; outer <= config.t_max; ++outer) {
    state.t = outer;
    state.w = weight_update(y - t * state.a, config.weight);
    const CodingResult coded =
        coding_step(state, y, t, geometry, cache, config, observer);
    if (!state.a.allFinite()) {
      throw NumericError("solve: coefficients are not finite");
    }
    result.outer_iterations = outer;
    result.inner_iterations.push_back(coded.iterations);
    result.inner_converged.push_back(coded.converged);
    if (config.trace_objective) trace();

    if (outer > 1) {
      const double change = (state.w - previous).norm() / previous.norm();
      result.weight_change.push_back(change);
      if (change < config.eps3) {
        result.converged = true;
        break;
      }
    }
    previous = state.w;
  }

  result.a = state.a;
  result.z = state.z;
  result.w = state.w;
  result.e = state.e;
  result.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

SolveResult solve(const FaceVector& y, const Dictionary& dict,
                  const SolverConfig& config) {
  config.validate();
  const GramCache cache(dict.columns(), config.ridge());
  return solve(y.values, dict.columns(), dict.geometry(), cache, config);
}

SolveResult solve_baseline(Baseline kind, const FaceVector& y,
                           const Dictionary& dict, double lambda_reg,
                           double lambda_star, const SolverConfig& base) {
  SolverConfig config = base;
  config.lambda_reg = lambda_reg;
  config.lambda_star = lambda_star;
  switch (kind) {
    case Baseline::src:
      config = method_config(Method::src, config);
      break;
    case Baseline::cr_rls:
      config = method_config(Method::cr_rls, config);
      break;
    case Baseline::lr3:
      config = method_config(Method::lr3, config);
      break;
  }
  return solve(y, dict, config);
}

}  // namespace robustface
