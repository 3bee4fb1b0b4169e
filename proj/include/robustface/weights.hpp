#pragma once

#include <functional>

#include <Eigen/Core>

namespace robustface {

using Index = Eigen::Index;


// Diagonal of the per-pixel weight matrix W. Entries are strictly positive.
using WeightVector = Eigen::VectorXd;

enum class WeightKind {
  logistic,      // w(x) = 1 / (1 + exp(mu * x^2 - mu * eta))
  constant_one,  // plain least squares
  custom,        // caller-supplied w(x)
};

// Adaptive: (mu, eta) are re-estimated from every residual the weight
// function sees. Frozen: the stored (mu, eta) are used unchanged, so the
// potential loss phi is a fixed function.
enum class WeightMode { adaptive, frozen };

// Which order statistic eta is read from. The default reads it from the
// squared residuals, which makes mu * eta = zeta dimensionless.
enum class EtaSource { squared_residual, abs_residual };

struct LogisticParams {
  double mu = 0.0;
  double eta = 0.0;
};

// Describes w = phi'(x) / x.
struct WeightFunction {
  WeightKind kind = WeightKind::logistic;
  WeightMode mode = WeightMode::adaptive;
  EtaSource eta_source = EtaSource::squared_residual;
  double gamma = 0.8;  // fraction used to pick the eta order statistic
  double zeta = 8.0;   // mu = zeta / eta
  LogisticParams frozen;
  // Must be positive and nonincreasing in |x|. Used for WeightKind::custom.
  std::function<double(double)> custom;

  static WeightFunction logistic(double gamma, double zeta = 8.0);
  static WeightFunction logistic_frozen(LogisticParams params);
  static WeightFunction constant_one();
  static WeightFunction custom_function(std::function<double(double)> w);

  // True when phi is a fixed function (no re-estimation between calls).
  bool is_fixed() const;
  // Throws ConfigError on out-of-range parameters.
  void validate() const;
};

// Smallest value eta may take; keeps mu finite for an exactly-zero residual.
inline constexpr double kEtaFloor = 1e-12;

// eta is the l-th largest squared residual entry (1-based, l = floor(gamma*d)
// raised to at least 1), mu = zeta / eta.
LogisticParams logistic_params(const Eigen::Ref<const Eigen::VectorXd>& residual,
                               double gamma, double zeta,
                               EtaSource source = EtaSource::squared_residual);

// Scalar logistic weight, floored at the smallest normal double so that it
// stays strictly positive for gross outliers.
double logistic_weight(double x, const LogisticParams& params);

// Weights for one residual vector. Throws NumericError on non-finite entries.
WeightVector weight_update(const Eigen::Ref<const Eigen::VectorXd>& residual,
                           const WeightFunction& wf);

// w(x) for a fixed weight function.
double weight_value(double x, const WeightFunction& wf);

// phi(x) = integral_0^|x| s w(s) ds. Closed form for the logistic and
// constant kinds, adaptive Simpson to 1e-10 absolute for custom weights.
// Throws Unsupported in adaptive mode.
double phi_value(double x, const WeightFunction& wf);

}  // namespace robustface
