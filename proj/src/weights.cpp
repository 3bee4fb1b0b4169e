#include "robustface/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "robustface/errors.hpp"

namespace robustface {

WeightFunction WeightFunction::logistic(double gamma, double zeta) {
  WeightFunction wf;
  wf.kind = WeightKind::logistic;
  wf.gamma = gamma;
  wf.zeta = zeta;
  return wf;
}

WeightFunction WeightFunction::logistic_frozen(LogisticParams params) {
  WeightFunction wf;
  wf.kind = WeightKind::logistic;
  wf.mode = WeightMode::frozen;
  wf.frozen = params;
  return wf;
}

WeightFunction WeightFunction::constant_one() {
  WeightFunction wf;
  wf.kind = WeightKind::constant_one;
  return wf;
}

WeightFunction WeightFunction::custom_function(std::function<double(double)> w) {
  WeightFunction wf;
  wf.kind = WeightKind::custom;
  wf.custom = std::move(w);
  return wf;
}

bool WeightFunction::is_fixed() const {
  return kind != WeightKind::logistic || mode == WeightMode::frozen;
}

void WeightFunction::validate() const {
  switch (kind) {
    case WeightKind::logistic:
      if (mode == WeightMode::adaptive) {
        if (!(gamma > 0.0 && gamma < 1.0)) {
          throw ConfigError("logistic gamma must lie in (0,1), got " +
                            std::to_string(gamma));
        }
        if (!(zeta > 0.0)) throw ConfigError("logistic zeta must be positive");
      } else if (!(frozen.mu > 0.0 && frozen.eta > 0.0)) {
        throw ConfigError("frozen logistic weights need positive mu and eta");
      }
      break;
    case WeightKind::custom:
      if (!custom) throw ConfigError("custom weight kind without a function");
      break;
    case WeightKind::constant_one:
      break;
  }
}

LogisticParams logistic_params(const Eigen::Ref<const Eigen::VectorXd>& residual,
                               double gamma, double zeta, EtaSource source) {
  const auto d = static_cast<std::size_t>(residual.size());
  if (d == 0) throw DegenerateInput("logistic_params: empty residual");
  std::vector<double> values(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double x = residual[static_cast<Index>(i)];
    values[i] = source == EtaSource::squared_residual ? x * x : std::abs(x);
  }
  auto l = static_cast<std::size_t>(std::floor(gamma * static_cast<double>(d)));
  l = std::clamp<std::size_t>(l, 1, d);
  // l-th largest, 1-based.
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(l - 1),
                   values.end(), std::greater<>());
  const double eta = std::max(values[l - 1], kEtaFloor);
  return {zeta / eta, eta};
}

double logistic_weight(double x, const LogisticParams& params) {
  // w = exp(-t) / (1 + exp(-t)), t = mu (x^2 - eta); evaluated on the side
  // that cannot overflow.
  const double t = params.mu * x * x - params.mu * params.eta;
  double w;
  if (t >= 0.0) {
    const double e = std::exp(-t);
    w = e / (1.0 + e);
  } else {
    w = 1.0 / (1.0 + std::exp(t));
  }
  return std::max(w, std::numeric_limits<double>::min());
}

namespace {

void check_finite(const Eigen::Ref<const Eigen::VectorXd>& residual) {
  if (!residual.allFinite()) {
    throw NumericError("weight_update: residual has non-finite entries");
  }
}

}  // namespace

double weight_value(double x, const WeightFunction& wf) {
  switch (wf.kind) {
    case WeightKind::constant_one:
      return 1.0;
    case WeightKind::custom:
      return wf.custom(x);
    case WeightKind::logistic:
      if (wf.mode != WeightMode::frozen) {
        throw Unsupported("adaptive logistic weights are not a fixed function");
      }
      return logistic_weight(x, wf.frozen);
  }
  return 1.0;
}

WeightVector weight_update(const Eigen::Ref<const Eigen::VectorXd>& residual,
                           const WeightFunction& wf) {
  check_finite(residual);
  WeightVector w(residual.size());
  switch (wf.kind) {
    case WeightKind::constant_one:
      w.setOnes();
      break;
    case WeightKind::custom:
      for (Index i = 0; i < residual.size(); ++i) w[i] = wf.custom(residual[i]);
      break;
    case WeightKind::logistic: {
      const LogisticParams params =
          wf.mode == WeightMode::frozen
              ? wf.frozen
              : logistic_params(residual, wf.gamma, wf.zeta, wf.eta_source);
      for (Index i = 0; i < residual.size(); ++i) {
        w[i] = logistic_weight(residual[i], params);
      }
      break;
    }
  }
  return w;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double phi_value(double x, const WeightFunction& wf) {
  if (!wf.is_fixed()) {
    throw Unsupported("phi is undefined for adaptive weights; freeze (mu, eta)");
  }
  const double b = std::abs(x);
  if (b == 0.0) return 0.0;
  if (wf.kind == WeightKind::constant_one) return 0.5 * b * b;
  if (wf.kind == WeightKind::logistic) {
    // With u = s^2 the integrand is a shifted logistic in u.
    const double mu = wf.frozen.mu;
    const double eta = wf.frozen.eta;
    auto softplus = [](double v) {
      return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
    };
    return 0.5 * (b * b - (softplus(mu * (b * b - eta)) - softplus(-mu * eta)) / mu);
  }

  const std::function<double(double)> integrand = [&wf](double s) {
    return s * weight_value(s, wf);
  };
  const double flo = integrand(0.0);
  const double fmid = integrand(0.5 * b);
  const double fhi = integrand(b);
  return adaptive_simpson(integrand, 0.0, b, flo, fmid, fhi,
                          simpson(flo, fmid, fhi, 0.0, b), 1e-10, 50);
}

}  // namespace robustface
