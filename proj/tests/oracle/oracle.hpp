#pragma once

// Reference solvers used only by the tests. They share no code with the
// library: plain std::vector storage, their own SVD and their own solvers.

#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

// Dense row-major matrix.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
};

using Vec = std::vector<double>;

struct OracleReport {
  bool pass = false;
  double residual = 0.0;  // the certified gap compared against the tolerance
  Vec solution;
  long iterations = 0;
  std::string detail;
};

struct Svd {
  Mat u;      // rows x k
  Vec sigma;  // k, descending
  Mat v;      // cols x k
};

// One-sided Jacobi SVD, k = min(rows, cols).
Svd jacobi_svd(const Mat& a);

double spectral_norm(const Mat& a);

// min_a sum_i w_i (y - T a)_i^2 subject to a >= 0, by projected gradient with
// step 1/L. Iterates until the KKT residual drops below `target` or the budget
// is spent; passes when the final KKT residual is at most `certify`.
OracleReport oracle_weighted_nnls(const Mat& t, const Vec& y, const Vec& w,
                                  double target = 1e-10, long max_iter = 1000000,
                                  double certify = 1e-6);

// ||a - max(a - g, 0)||_inf with g the gradient of sum_i w_i (y - T a)_i^2.
double nnls_kkt_residual(const Mat& t, const Vec& y, const Vec& w, const Vec& a);

// Certifies that x = argmin_X 0.5 ||X - m||_F^2 + tau ||X||_* through the
// subgradient conditions of the nuclear norm.
OracleReport oracle_prox_nuclear(const Mat& m, double tau, const Mat& x,
                                 double tol = 1e-8);

// Minimizer of 0.5 (x - v)^2 + kappa * g(x) over [-10, 10] by a 1e-6 grid
// refined with ternary search. kind is "nonneg" (g = indicator of x >= 0) or
// "l1" (g = |x|).
double oracle_scalar_prox_grid(const std::string& kind, double v, double kappa);
Vec oracle_scalar_prox_grid(const std::string& kind, const Vec& v, double kappa);

}  // namespace oracle
