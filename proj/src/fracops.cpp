#include "fracstab/fracops.hpp"

#include <cmath>
#include <cstddef>

#include "fracstab/errors.hpp"
#include "fracstab/gammafn.hpp"
#include "fracstab/system.hpp"

namespace fracstab {
namespace {

void check_order(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw DomainError("fractional order must lie in (0, 1)");
  }
}

}  // namespace

void SampledPath::validate() const {
  if (!(h > 0.0)) throw DomainError("sampled path requires step h > 0");
  if (values.empty()) throw DomainError("sampled path has no samples");
  const auto n = values.front().size();
  if (n == 0) throw DomainError("sampled path has zero-dimensional samples");
  for (const auto& v : values) {
    if (v.size() != n) throw DomainError("sampled path samples differ in dimension");
  }
}

SampledPath rl_integral(const SampledPath& path, double q) {
  check_order(q);
  path.validate();
  const std::size_t count = path.values.size();
  const int n = path.dimension();
  const double scale = 1.0 / (gamma_fn(q) * q);  // 1/Gamma(q+1)

  SampledPath out;
  out.h = path.h;
  out.values.assign(count, Eigen::VectorXd::Zero(n));

  // d[m] = m^q - (m-1)^q, so the weight on cell [t_j, t_{j+1}] inside
  // (I^q f)(t_k) is h^q d[k-j] / Gamma(q+1) against the cell midpoint value.
  std::vector<double> d(count, 0.0);
  for (std::size_t m = 1; m < count; ++m) {
    d[m] = std::pow(static_cast<double>(m), q) - std::pow(static_cast<double>(m - 1), q);
  }
  const double hq = std::pow(path.h, q);

  for (std::size_t k = 1; k < count; ++k) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < k; ++j) {
      acc += d[k - j] * 0.5 * (path.values[j] + path.values[j + 1]);
    }
    out.values[k] = scale * hq * acc;
  }
  return out;
}

SampledPath caputo_derivative(const SampledPath& path, double q) {
  check_order(q);
  path.validate();
  const std::size_t count = path.values.size();
  const int n = path.dimension();
  const double scale = 1.0 / (gamma_fn(1.0 - q) * (1.0 - q));

  SampledPath out;
  out.h = path.h;
  out.values.assign(count, Eigen::VectorXd::Zero(n));

  std::vector<double> d(count, 0.0);
  for (std::size_t m = 1; m < count; ++m) {
    d[m] = std::pow(static_cast<double>(m), 1.0 - q) -
           std::pow(static_cast<double>(m - 1), 1.0 - q);
  }
  const double h_pow = std::pow(path.h, -q);

  for (std::size_t k = 1; k < count; ++k) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < k; ++j) {
      acc += d[k - j] * (path.values[j + 1] - path.values[j]);
    }
    out.values[k] = scale * h_pow * acc;
  }
  return out;
}

double deterministic_residual(const SampledPath& traj, const FracSystem& system) {
  traj.validate();
  if (traj.dimension() != system.n) {
    throw DomainError("trajectory dimension does not match system dimension");
  }
  if (system.sigma.name != "zero" || system.g.name != "zero") {
    throw DomainError(
        "deterministic residual requires zero diffusion and zero jump coefficient");
  }
  const std::size_t count = traj.values.size();
  if (count < 7) throw DomainError("trajectory too short for residual check");

  auto f = make_drift(system.f, system.n);
  SampledPath deriv = caputo_derivative(traj, system.q);

  double worst = 0.0;
  for (std::size_t k = 5; k < count; ++k) {
    const double t = traj.time_at(k);
    Eigen::VectorXd res =
        deriv.values[k] - system.A * traj.values[k] - f(t, traj.values[k]);
    worst = std::max(worst, res.norm());
  }
  return worst;
}

}  // namespace fracstab
