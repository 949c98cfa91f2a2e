// Discrete fractional operators on uniformly sampled paths: the
// Riemann-Liouville integral I^q (product-rectangle rule, kernel integrated
// exactly) and the Caputo derivative (L1 scheme), plus the residual check the
// solver's verification mode uses.
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fracstab {

struct FracSystem;  // solver module; used by deterministic_residual

struct SampledPath {
  double h = 0.0;                       // uniform step > 0
  std::vector<Eigen::VectorXd> values;  // samples at t_k = k h

  int dimension() const {
    return values.empty() ? 0 : static_cast<int>(values.front().size());
  }
  double time_at(std::size_t k) const { return h * static_cast<double>(k); }
  void validate() const;  // throws DomainError on shape violations
};

// (I^q f)(t_k) with weights [(t_k-t_j)^q - (t_k-t_{j+1})^q]/q applied to
// midpoint (trapezoid-of-endpoints) values of f; output at t_0 is 0.
SampledPath rl_integral(const SampledPath& path, double q);

// Caputo derivative, L1 scheme on first differences; output at t_0 is 0.
SampledPath caputo_derivative(const SampledPath& path, double q);

// max_k || D^q x (t_k) - A x(t_k) - f(t_k, x(t_k)) || over grid points k >= 5
// (the L1 scheme's startup region is skipped). Requires the system to have
// zero diffusion and zero jump coefficient.
double deterministic_residual(const SampledPath& traj, const FracSystem& system);

}  // namespace fracstab
