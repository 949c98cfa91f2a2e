// Monte Carlo layer: mean-square ensemble statistics with confidence bands,
// log-linear decay fitting, and distributional self-tests for the noise
// generators. Reductions are performed in path order, so results do not
// depend on thread scheduling.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracstab/system.hpp"

namespace fracstab {

struct EnsembleStats {
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> mean_sq;        // mean of ||x(t_k)||^2 over used paths
  std::vector<double> ci_half_width;  // 95% normal half width
  int paths_requested = 0;
  int paths_used = 0;
  std::uint64_t divergent = 0;
};

// Simulates paths with streams (seed, 0..paths-1). Divergent paths are
// excluded and counted; more than 1% divergent aborts with DivergenceError.
EnsembleStats run_ensemble(const FracSystem& system, double h, int paths,
                           std::uint64_t seed);

struct DecayFit {
  double mu_hat = 0.0;      // decay rate: minus the slope of ln mean_sq vs t
  double mu_se = 0.0;       // standard error of the slope estimate
  double m_star_hat = 0.0;  // exp(intercept)
  double r_squared = 0.0;
  std::size_t first_index = 0;
  int points = 0;
};

// Ordinary least squares of ln mean_sq against t over the trailing
// window_fraction of the horizon; needs at least 10 positive samples there.
DecayFit fit_decay(const EnsembleStats& stats, double window_fraction);

struct IsometryReport {
  std::string case_name;
  double estimate = 0.0;
  double expected = 0.0;
  double se = 0.0;
  double z = 0.0;        // (estimate - expected) / se
  bool one_sided = false;  // pass criterion is z <= bound, not |z| <= bound
};

// Monte Carlo checks of the noise layer against exact moments:
//   wiener_isometry  - second moment of a left-point Ito sum
//   wiener_p4_bound  - fourth moment against the Gaussian value (one-sided)
//   jump_isometry    - second moment of a compensated compound-Poisson sum
//   jump_martingale  - mean of a compensated compound-Poisson sum
IsometryReport isometry_report(int paths, std::uint64_t seed,
                               const std::string& case_name);

}  // namespace fracstab
