// Noise inputs: Wiener increments, compound-Poisson jump sampling, and the
// discrete Ito / compensator accumulators the solver consumes. All randomness
// flows through counter-based streams, so outputs are reproducible and
// independent of evaluation order.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fracstab/fracops.hpp"
#include "fracstab/nonlinearity.hpp"
#include "fracstab/rng.hpp"

namespace fracstab {

struct MarkFamily {
  enum class Kind { discrete, uniform, gaussian };
  Kind kind = Kind::discrete;
  // discrete: values/probs (same length, probs sum to 1)
  std::vector<double> values{1.0};
  std::vector<double> probs{1.0};
  // uniform: [lower, upper); gaussian: mean/sd
  double lower = 0.0, upper = 1.0;
  double mean = 0.0, sd = 1.0;
};

struct JumpMeasure {
  double intensity = 0.0;  // expected jumps per unit time, >= 0
  MarkFamily marks;

  // Throws DomainError on hard violations; returns soft warnings (e.g. the
  // mark family puts weight on nonpositive values).
  std::vector<std::string> validate() const;
};

struct JumpRecord {
  double time = 0.0;
  double mark = 0.0;
};

// steps-by-dim matrix of increments; row k holds sqrt(h) * N(0,1) draws for
// the interval [k h, (k+1) h).
Eigen::MatrixXd wiener_increments(int dim, int steps, double h, const RngStream& stream);

// Compound-Poisson events on [0, T], sorted by time. Count, times, and marks
// use disjoint counter domains, so coefficient changes never reshuffle draws.
std::vector<JumpRecord> sample_jumps(const JumpMeasure& measure, double horizon,
                                     const RngStream& stream);

// Left-point Ito sums: I_0 = 0, I_{k+1} = I_k + sigma(t_k, x_k) dW_k.
SampledPath ito_path(const NonlinearityHandle& sigma_spec, const SampledPath& x_path,
                     const Eigen::MatrixXd& dW);

// Mean of eta -> integrand(eta) under the mark family. Quadrature families
// cross-check two node counts and throw AccuracyError on disagreement.
Eigen::VectorXd mark_average(const std::function<Eigen::VectorXd(double)>& integrand,
                             const MarkFamily& family);

// Compensator accumulator: C_0 = 0,
// C_{k+1} = C_k + h * intensity * E_eta[ g(t_k, x_k, eta) ].
SampledPath compensator_path(const NonlinearityHandle& g_spec,
                             const SampledPath& x_path, const JumpMeasure& measure);

}  // namespace fracstab
