// Mild-solution time stepper. The state is reconstructed from the variation
// of constants form: homogeneous evolution, a fractional convolution of
// drift + accumulated Ito integral - compensator rate, and kernel-weighted
// realized jumps.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fracstab/fracops.hpp"
#include "fracstab/rng.hpp"
#include "fracstab/stochastic.hpp"
#include "fracstab/system.hpp"

namespace fracstab {

struct SchemeMeta {
  std::string weight_scheme = "midpoint_ml_kernel";
  // jump events whose kernel evaluation was pushed to the next grid point
  // because they fell within one step of the evaluation time
  std::uint64_t deferred_jump_evals = 0;
  std::uint64_t jump_events = 0;
};

struct Trajectory {
  SampledPath grid;
  std::vector<JumpRecord> jumps;
  RngStream stream;
  SchemeMeta scheme_meta;
};

// Lag weights W[m], m = 1..k (returned at index m-1):
//   W[m] = (h^q / q) (m^q - (m-1)^q) E_{q,q}(A ((m - 1/2) h)^q),
// the product-rectangle discretization of the convolution kernel
// (t-s)^{q-1} E_{q,q}(A (t-s)^q) over one grid cell.
std::vector<Eigen::MatrixXd> conv_weights(double q, const Eigen::MatrixXd& A,
                                          double h, int k);

// Simulate one path on the uniform grid t_k = k h, k = 0..T/h. The horizon
// must be an integer multiple of h. Throws DivergenceError if the state
// leaves the trust region or turns nonfinite.
Trajectory simulate_path(const FracSystem& system, double h, const RngStream& stream);

// Two-dimensional benchmark system: weakly damped linear part, time-ramped
// crossed quadratic drift, strong diagonal multiplicative noise with scales
// (-s1, -s2), and unit-rate unit-mark jumps with a decaying jump coefficient.
FracSystem reference_system(double s1 = 9.8, double s2 = 10.0);

Trajectory simulate_reference(double h, const RngStream& stream);

}  // namespace fracstab
