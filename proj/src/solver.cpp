#include "fracstab/solver.hpp"

#include <cmath>
#include <cstddef>

#include "fracstab/errors.hpp"
#include "fracstab/mittag_leffler.hpp"

namespace fracstab {
namespace {

constexpr double kDivergenceNorm = 1e12;

int step_count(double horizon, double h) {
  if (!(h > 0.0)) throw DomainError("step h must be > 0");
  const double ratio = horizon / h;
  const int k = static_cast<int>(std::llround(ratio));
  if (k < 1 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("horizon T must be a positive integer multiple of the step h");
  }
  return k;
}

}  // namespace

std::vector<Eigen::MatrixXd> conv_weights(double q, const Eigen::MatrixXd& A,
                                          double h, int k) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("conv_weights requires q in (0, 1]");
  }
  if (!(h > 0.0)) throw DomainError("conv_weights requires h > 0");
  if (k < 0) throw DomainError("conv_weights requires k >= 0");

  MLMatrixEvaluator ml(A);
  const double hq_over_q = std::pow(h, q) / q;
  std::vector<Eigen::MatrixXd> weights;
  weights.reserve(static_cast<std::size_t>(k));
  for (int m = 1; m <= k; ++m) {
    const double cell =
        std::pow(static_cast<double>(m), q) - std::pow(static_cast<double>(m - 1), q);
    const double mid = (static_cast<double>(m) - 0.5) * h;
    weights.push_back(hq_over_q * cell * ml.eval(q, q, std::pow(mid, q)));
  }
  return weights;
}

Trajectory simulate_path(const FracSystem& system, double h, const RngStream& stream) {
  system.validate();
  const int steps = step_count(system.T, h);
  const int n = system.n;
  const double q = system.q;

  auto f = make_drift(system.f, n);
  auto sigma = make_sigma(system.sigma, n);
  auto g = make_jump(system.g, n);
  const bool has_jumps = system.jumps.intensity > 0.0 && system.g.name != "zero";
  const bool has_noise = system.sigma.name != "zero";

  MLMatrixEvaluator ml(system.A);
  const std::vector<Eigen::MatrixXd> weights = conv_weights(q, system.A, h, steps);

  const Eigen::MatrixXd dW = wiener_increments(n, steps, h, stream);
  const std::vector<JumpRecord> jumps = sample_jumps(system.jumps, system.T, stream);

  Trajectory traj;
  traj.grid.h = h;
  traj.grid.values.assign(static_cast<std::size_t>(steps) + 1,
                          Eigen::VectorXd::Zero(n));
  traj.grid.values[0] = system.x0;
  traj.jumps = jumps;
  traj.stream = stream;
  traj.scheme_meta.jump_events = jumps.size();

  // u_j = f(t_j, x_j) + I_j - intensity * mean_eta g(t_j, x_j, eta), filled
  // as the state advances; I_j is the left-point Ito accumulator.
  std::vector<Eigen::VectorXd> u(static_cast<std::size_t>(steps));
  Eigen::VectorXd ito_acc = Eigen::VectorXd::Zero(n);

  for (int k = 1; k <= steps; ++k) {
    const std::size_t prev = static_cast<std::size_t>(k) - 1;
    const double t_prev = h * static_cast<double>(k - 1);
    const Eigen::VectorXd& x_prev = traj.grid.values[prev];

    Eigen::VectorXd drift_term = f(t_prev, x_prev);
    if (has_noise && k >= 2) {
      ito_acc += sigma(h * static_cast<double>(k - 2), traj.grid.values[prev - 1]) *
                 dW.row(k - 2).transpose();
    }
    Eigen::VectorXd comp_rate = Eigen::VectorXd::Zero(n);
    if (has_jumps) {
      comp_rate = system.jumps.intensity *
                  mark_average([&](double eta) { return g(t_prev, x_prev, eta); },
                               system.jumps.marks);
    }
    u[prev] = drift_term + ito_acc - comp_rate;

    const double t_k = h * static_cast<double>(k);
    Eigen::VectorXd x = ml.eval(q, 1.0, std::pow(t_k, q)) * system.x0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
      x += weights[static_cast<std::size_t>(k) - 1 - j] * u[j];
    }
    if (has_jumps) {
      for (const JumpRecord& event : jumps) {
        if (event.time >= t_k) break;
        const double lag = t_k - event.time;
        if (lag < h) {
          // kernel is singular at zero lag; this event enters next step
          ++traj.scheme_meta.deferred_jump_evals;
          continue;
        }
        const auto idx = static_cast<std::size_t>(event.time / h);
        const Eigen::VectorXd& x_at_jump = traj.grid.values[std::min(idx, prev)];
        x += std::pow(lag, q - 1.0) * (ml.eval(q, q, std::pow(lag, q)) *
                                       g(event.time, x_at_jump, event.mark));
      }
    }

    if (!x.allFinite() || x.norm() > kDivergenceNorm) {
      throw DivergenceError("trajectory diverged at step " + std::to_string(k) +
                                " (t = " + std::to_string(t_k) + ")",
                            k, t_k);
    }
    traj.grid.values[static_cast<std::size_t>(k)] = x;
  }
  return traj;
}

FracSystem reference_system(double s1, double s2) {
  FracSystem sys;
  sys.n = 2;
  sys.q = 0.6;
  sys.T = 1.0;
  sys.A = Eigen::MatrixXd::Zero(2, 2);
  sys.A(0, 0) = -0.1;
  sys.A(1, 1) = -0.1;
  sys.f.name = "crossed_quadratic";
  sys.sigma.name = "diagonal_multiplicative";
  sys.sigma.params = {-s1, -s2};
  sys.g.name = "ramped_exp_over_mark";
  sys.g.params = {0.2};
  sys.jumps.intensity = 1.0;
  sys.jumps.marks.kind = MarkFamily::Kind::discrete;
  sys.jumps.marks.values = {1.0};
  sys.jumps.marks.probs = {1.0};
  sys.x0 = Eigen::VectorXd::Ones(2);
  return sys;
}

Trajectory simulate_reference(double h, const RngStream& stream) {
  return simulate_path(reference_system(), h, stream);
}

}  // namespace fracstab
