// System description: fractional order, horizon, linear part, named
// coefficient functions, jump measure, and initial state.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fracstab/nonlinearity.hpp"
#include "fracstab/stochastic.hpp"

namespace fracstab {

struct FracSystem {
  int n = 0;
  double q = 0.75;  // Caputo order; the solver targets q in (1/2, 1)
  double T = 1.0;
  Eigen::MatrixXd A;
  NonlinearityHandle f;      // drift
  NonlinearityHandle sigma;  // diffusion
  NonlinearityHandle g;      // jump coefficient
  JumpMeasure jumps;
  Eigen::VectorXd x0;
  // Orders outside (1/2, 1) lack the square-integrability the certificates
  // assume; set this to simulate anyway (e.g. classical-limit checks).
  bool allow_any_order = false;

  // Throws DomainError on hard violations; returns soft warnings.
  std::vector<std::string> validate() const;
};

}  // namespace fracstab
