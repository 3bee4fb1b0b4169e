#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "robustface/model.hpp"
#include "robustface/weights.hpp"

namespace robustface {

// Coefficient regularizer theta(a).
enum class Regularizer {
  nonneg,  // indicator of the nonnegative orthant
  l1,      // lambda_reg * ||a||_1
  l2,      // lambda_reg * ||a||_2^2, solved without the z / u2 split
};

struct SolverConfig {
  double lambda_star = 0.05;  // nuclear-norm weight on the error image
  double rho1 = 1.0;          // penalty on y - Ta = e
  double rho2 = 0.1;          // penalty on a = z
  double lambda_reg = 1e-3;   // weight of the l1 / l2 coefficient regularizer
  double eps1 = 1e-2;         // ||y - Ta - e||_2 tolerance
  double eps2 = 1e-1;         // ||a - z||_2 tolerance
  double eps3 = 1e-2;         // relative weight-change tolerance
  int t_max = 100;            // reweighting (outer) iterations
  int s_max = 500;            // ADMM (inner) iterations per coding step
  Regularizer regularizer = Regularizer::nonneg;
  bool low_rank = true;
  WeightFunction weight = WeightFunction::logistic(0.8);
  bool trace_objective = false;
  // Carry the duals across reweighting steps instead of zeroing them.
  bool warm_start_duals = false;

  // Ridge term of the cached normal matrix: rho2/rho1, or 2*lambda_reg/rho1
  // for the l2 regularizer.
  double ridge() const;
  // Nuclear weight actually applied (zero with low_rank off).
  double effective_lambda_star() const { return low_rank ? lambda_star : 0.0; }
  // Throws ConfigError.
  void validate() const;
};

// The named algorithms, all expressed as SolverConfig presets.
enum class Method {
  f_lr_irnnls,
  f_irnnls,
  f_irls,
  f_irsc,
  f_lr_irls,
  f_lr_irsc,
  src,
  cr_rls,
  lr3,
};

// Throws ConfigError for an unknown name. Names are the usual spellings,
// e.g. "F-LR-IRNNLS", "CR-RLS", "LR3".
Method parse_method(std::string_view name);
std::string_view method_name(Method method);

// Applies a method's weight kind, regularizer and low-rank switch on top of
// `base` (which supplies penalties, tolerances and the weight parameters).
SolverConfig method_config(Method method, const SolverConfig& base = {});

// Live ADMM iterate of one coding solve.
struct AdmmState {
  Eigen::VectorXd a;
  Eigen::VectorXd z;
  Eigen::VectorXd e;
  Eigen::VectorXd u1;  // dual of y - Ta = e
  Eigen::VectorXd u2;  // dual of a = z
  WeightVector w;
  int s = 0;  // inner iteration
  int t = 0;  // outer iteration

  // a = 1/n, z = a, everything else zero, w = 1.
  static AdmmState initial(Index d, Index n);
};

// P = (T^T T + ridge I)^{-1}, formed once per dictionary.
class GramCache {
 public:
  GramCache() = default;
  GramCache(const Eigen::Ref<const Eigen::MatrixXd>& t, double ridge);

  double ridge() const { return ridge_; }
  Index size() const { return p_.rows(); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& b) const {
    return p_ * b;
  }

 private:
  Eigen::MatrixXd p_;
  double ridge_ = 0.0;
};

GramCache precompute_gram(const Eigen::Ref<const Eigen::MatrixXd>& t, double ridge);

// Number of matrix factorizations/inversions performed by the library so far.
// Only GramCache construction increments it.
std::uint64_t inversion_count();

// Single ADMM updates. `t` is the dictionary matrix and `geometry` the image
// shape used to matricize the error.
Eigen::VectorXd e_update(const AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry,
                         const SolverConfig& config);
Eigen::VectorXd z_update(const AdmmState& state, const SolverConfig& config);
// Uses state.e and state.z as the fresh iterates and state.u1, state.u2 as the
// previous duals. Throws ConfigError if the cache ridge does not match.
Eigen::VectorXd a_update(const AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const GramCache& cache, const SolverConfig& config);
void dual_update(AdmmState& state, const Eigen::Ref<const Eigen::VectorXd>& y,
                 const Eigen::Ref<const Eigen::MatrixXd>& t,
                 const SolverConfig& config);

// Called after every inner iteration with the updated state.
using IterationObserver = std::function<void(const AdmmState&)>;

struct CodingResult {
  Eigen::VectorXd a;
  int iterations = 0;
  bool converged = false;
  double primal_residual = 0.0;    // ||y - Ta - e||_2
  double coupling_residual = 0.0;  // ||a - z||_2
};

// Minimizes the weighted coding problem for the fixed weights in state.w,
// starting from state.a. Duals are zeroed on entry unless
// config.warm_start_duals. On return `state` holds the returned iterate; if
// s_max is hit, that is the iterate with the smallest tolerance-scaled primal
// residual and the result is flagged non-converged.
CodingResult coding_step(AdmmState& state,
                         const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry, const GramCache& cache,
                         const SolverConfig& config,
                         const IterationObserver& observer = {});

// Convenience form starting from a = 1/n.
CodingResult coding_step(const Eigen::Ref<const Eigen::VectorXd>& y,
                         const Eigen::Ref<const Eigen::MatrixXd>& t,
                         const ImageGeometry& geometry,
                         const Eigen::Ref<const WeightVector>& w,
                         const GramCache& cache, const SolverConfig& config);

struct SolveResult {
  Eigen::VectorXd a;
  Eigen::VectorXd z;  // split copy of a (equals a for the l2 regularizer)
  WeightVector w;
  Eigen::VectorXd e;
  int outer_iterations = 0;
  std::vector<int> inner_iterations;   // per outer iteration
  std::vector<bool> inner_converged;   // per outer iteration
  std::vector<double> weight_change;   // relative change, from t = 2 on
  std::vector<double> objective_trace; // J(a^1), J(a^2), ... when traced
  bool converged = false;              // weight change fell below eps3
  double wall_time_seconds = 0.0;
};

// Reweighted ADMM (outer loop alternating weight_update and coding_step).
SolveResult solve(const Eigen::Ref<const Eigen::VectorXd>& y,
                  const Eigen::Ref<const Eigen::MatrixXd>& t,
                  const ImageGeometry& geometry, const GramCache& cache,
                  const SolverConfig& config,
                  const IterationObserver& observer = {});

// Builds the GramCache for `dict` and solves.
SolveResult solve(const FaceVector& y, const Dictionary& dict,
                  const SolverConfig& config);

struct ObjectiveValue {
  double value = 0.0;  // +inf when infeasible
  bool feasible = true;
  double data_term = 0.0;     // sum_i phi((y - Ta)_i)
  double nuclear_term = 0.0;  // lambda_star * ||T_M(y - Ta)||_*
  double regularizer_term = 0.0;
};

// J(a) = sum phi(r_i) + lambda_star ||T_M(r)||_* + theta(a), r = y - Ta.
// Requires a fixed weight function (Unsupported otherwise).
ObjectiveValue objective_value(const Eigen::Ref<const Eigen::VectorXd>& a,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               const Eigen::Ref<const Eigen::MatrixXd>& t,
                               const ImageGeometry& geometry,
                               const SolverConfig& config);

enum class Baseline { src, cr_rls, lr3 };

// SRC: unit weights, l1, no low rank. CR-RLS: unit weights, l2, no low rank,
// one reweighting step. LR3: unit weights, l2, low rank.
SolveResult solve_baseline(Baseline kind, const FaceVector& y,
                           const Dictionary& dict, double lambda_reg,
                           double lambda_star, const SolverConfig& base = {});

}  // namespace robustface
