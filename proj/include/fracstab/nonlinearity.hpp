// Named coefficient functions for the drift, diffusion, and jump slots of a
// system, constructed from (name, params) pairs so configs stay declarative.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace fracstab {

struct NonlinearityHandle {
  std::string name = "zero";
  std::vector<double> params;
};

using DriftFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using SigmaFn = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;
using JumpFn =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, double)>;

// Drift f(t, x). Names:
//   zero                 []            f = 0
//   linear               [n*n, row-major]  f = M x
//   crossed_quadratic    []            n = 2; f1 = -x2^2/(1-t), f2 = -x1^2/(1-t),
//                                      the denominator clamped away from 0
//   saturated_quadratic  [c]           f_i = -c x_i^2 / (1 + x_i^2)
DriftFn make_drift(const NonlinearityHandle& handle, int n);

// Diffusion sigma(t, x), an n-by-n matrix against an n-dimensional Wiener
// increment. Names:
//   zero                     []        sigma = 0
//   constant                 [n*n, row-major]  sigma = M
//   diagonal_multiplicative  [c_1..c_n]  sigma = diag(c_i x_i)
SigmaFn make_sigma(const NonlinearityHandle& handle, int n);

// Jump coefficient g(t, x, eta). Names:
//   zero                  []           g = 0
//   constant              [c_1..c_n]   g_i = c_i
//   ramped_exp_over_mark  [c]          g_i = -(c - t) x_i e^{-t} / eta
JumpFn make_jump(const NonlinearityHandle& handle, int n);

}  // namespace fracstab
