// Two-parameter Mittag-Leffler function E_{q,p}(z) = sum_k z^k / Gamma(kq + p)
// for scalar and matrix arguments, plus the exponential-envelope fit and the
// Laplace-identity self-check.
//
// Evaluation strategy: the defining series (long double, compensated
// summation) while |z| stays below both the configured crossover and the
// cancellation cap 14^q; otherwise inversion of the Laplace transform along a
// parabolic contour with explicit residue correction for the poles of
// 1/(s^q - z) that fall right of the contour. Both branches carry a computable
// absolute error bound; the advertised contract is
// |value - exact| <= truncation_bound <= 1e-12 * max(1, |value|).
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace fracstab {

struct MLEvaluation {
  std::complex<double> value;
  double truncation_bound = 0.0;  // absolute error bound, >= 0
  int terms_used = 1;             // series terms or contour nodes
};

struct MLOptions {
  double series_crossover = 5.0;  // |z| above this goes to the contour branch
  int term_budget = 1000;         // max series terms before AccuracyError
};

// E_{q,p}(z) for q > 0, p > 0, finite complex z.
MLEvaluation ml_scalar(double q, double p, std::complex<double> z,
                       const MLOptions& options = MLOptions());

// E_{q,p}(A * t_pow) for square real A and t_pow >= 0. Routes: elementwise
// scalar on the diagonal for diagonal A; eigendecomposition when A is
// diagonalizable with eigenvector condition number < 1e8; truncated matrix
// power series (remainder bound <= 1e-10) otherwise.
Eigen::MatrixXd ml_matrix(double q, double p, const Eigen::MatrixXd& A,
                          double t_pow);

// Same routing as ml_matrix but with the decomposition of A computed once and
// reused across many t_pow values (the solver's per-lag kernel cache).
class MLMatrixEvaluator {
 public:
  explicit MLMatrixEvaluator(const Eigen::MatrixXd& A);

  Eigen::MatrixXd eval(double q, double p, double t_pow) const;
  const std::string& route() const { return route_; }

 private:
  Eigen::MatrixXd a_;
  std::string route_;  // "diagonal" | "eigen" | "series"
  Eigen::MatrixXcd vectors_;
  Eigen::MatrixXcd vectors_inv_;
  Eigen::VectorXcd eigenvalues_;
};

// Exponential envelope ||E_{q,p}(A t^q)|| <= n_const * exp(-omega t) on
// [0, horizon], certified pointwise on a 10x refined grid.
struct MLEnvelope {
  double n_const = 1.0;       // >= 1
  double omega = 0.0;         // > 0
  double max_violation = 0.0; // <= 0 when the bound is certified
};

MLEnvelope fit_envelope(double q, double p, const Eigen::MatrixXd& A,
                        double horizon, int grid_points);

// | integral_0^inf e^{-st} t^{p-1} E_{q,p}(a t^q) dt  -  s^{q-p}/(s^q - a) |
// by adaptive quadrature with the tail cut at e^{-st} < 1e-14. Requires s > 0
// and s^q > a.
double laplace_residual(double q, double p, double a, double s);

}  // namespace fracstab
