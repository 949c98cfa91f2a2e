#include "fracstab/solver.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "fracstab/errors.hpp"
#include "fracstab/gammafn.hpp"
#include "fracstab/mittag_leffler.hpp"

using namespace fracstab;

namespace {

FracSystem quiet_linear(double lambda, double q = 0.6, double T = 1.0) {
  FracSystem sys;
  sys.n = 1;
  sys.q = q;
  sys.T = T;
  sys.A = Eigen::MatrixXd::Constant(1, 1, lambda);
  sys.x0 = Eigen::VectorXd::Ones(1);
  return sys;
}

}  // namespace

//======================== convolution weights ===============================

TEST_CASE("conv_weights mass for A = 0 is t^q / (q Gamma(q))") {
  const double q = 0.6, h = 0.01;
  const int k = 100;
  auto weights = conv_weights(q, Eigen::MatrixXd::Zero(1, 1), h, k);
  REQUIRE(weights.size() == static_cast<std::size_t>(k));
  double mass = 0.0;
  for (const auto& w : weights) mass += w(0, 0);
  const double t = h * k;
  CHECK(mass == doctest::Approx(std::pow(t, q) / (q * gamma_fn(q))).epsilon(1e-13));
}

TEST_CASE("conv_weights collapse to h I at q = 1, A = 0") {
  auto weights = conv_weights(1.0, Eigen::MatrixXd::Zero(2, 2), 0.05, 10);
  for (const auto& w : weights) {
    CHECK((w - 0.05 * Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-14);
  }
}

TEST_CASE("conv_weights row sum converges to the closed-form kernel integral") {
  // sum_m W[m] ~ int_0^t v^{q-1} E_{q,q}(lambda v^q) dv = t^q E_{q,q+1}(lambda t^q).
  const double q = 0.6, lambda = -0.5, t = 1.0;
  const double closed =
      std::pow(t, q) *
      ml_scalar(q, q + 1.0, {lambda * std::pow(t, q), 0.0}).value.real();
  double prev_err = std::numeric_limits<double>::infinity();
  for (double h : {0.02, 0.01, 0.005}) {
    const int k = static_cast<int>(std::lround(t / h));
    auto weights = conv_weights(q, Eigen::MatrixXd::Constant(1, 1, lambda), h, k);
    double mass = 0.0;
    for (const auto& w : weights) mass += w(0, 0);
    const double err = std::abs(mass - closed);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err <= 5e-4);
}

TEST_CASE("conv_weights validation") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS_AS(conv_weights(0.0, a, 0.1, 3), DomainError);
  CHECK_THROWS_AS(conv_weights(1.2, a, 0.1, 3), DomainError);
  CHECK_THROWS_AS(conv_weights(0.6, a, 0.0, 3), DomainError);
  CHECK_THROWS_AS(conv_weights(0.6, a, 0.1, -1), DomainError);
}

//======================== deterministic limits ==============================

TEST_CASE("simulate_path keeps a zero system at its initial state") {
  FracSystem sys;
  sys.n = 2;
  sys.q = 0.7;
  sys.T = 1.0;
  sys.A = Eigen::MatrixXd::Zero(2, 2);
  sys.x0 = Eigen::VectorXd::Ones(2) * 3.0;
  Trajectory traj = simulate_path(sys, 0.01, RngStream{1, 0});
  for (const auto& x : traj.grid.values) {
    CHECK((x - sys.x0).norm() <= 1e-14);
  }
}

TEST_CASE("simulate_path homogeneous linear term is the envelope function") {
  // With zero noise and zero drift, the scheme reproduces E_q(lambda t^q) x0
  // up to the accuracy of the function evaluation itself.
  const double lambda = -0.8, q = 0.6;
  Trajectory traj = simulate_path(quiet_linear(lambda, q), 0.01, RngStream{1, 0});
  for (std::size_t k = 0; k < traj.grid.values.size(); k += 9) {
    const double t = traj.grid.time_at(k);
    const double want =
        ml_scalar(q, 1.0, {lambda * std::pow(t, q), 0.0}).value.real();
    CHECK(traj.grid.values[k](0) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("drift route converges to the linear-part route") {
  // Same dynamics posed two ways: lambda inside A (homogeneous term, exact)
  // versus lambda inside the drift (goes through the convolution weights).
  const double lambda = -0.1, q = 0.6;
  FracSystem via_a = quiet_linear(lambda, q);

  FracSystem via_f = quiet_linear(0.0, q);
  via_f.A.setZero();
  via_f.f.name = "linear";
  via_f.f.params = {lambda};

  double prev_err = 0.0;
  bool first = true;
  for (double h : {0.04, 0.02, 0.01}) {
    Trajectory ta = simulate_path(via_a, h, RngStream{1, 0});
    Trajectory tf = simulate_path(via_f, h, RngStream{1, 0});
    double err = 0.0;
    for (std::size_t k = 0; k < ta.grid.values.size(); ++k) {
      err = std::max(err,
                     (ta.grid.values[k] - tf.grid.values[k]).norm());
    }
    if (!first) CHECK(err < prev_err);
    first = false;
    prev_err = err;
  }
  CHECK(prev_err <= 2e-3);
}

//======================== reproducibility and noise wiring ==================

TEST_CASE("simulate_path is reproducible and stream-sensitive") {
  FracSystem sys = quiet_linear(-0.3);
  sys.sigma.name = "constant";
  sys.sigma.params = {0.5};
  Trajectory a = simulate_path(sys, 0.01, RngStream{11, 3});
  Trajectory b = simulate_path(sys, 0.01, RngStream{11, 3});
  Trajectory c = simulate_path(sys, 0.01, RngStream{11, 4});
  REQUIRE(a.grid.values.size() == b.grid.values.size());
  double max_ab = 0.0, max_ac = 0.0;
  for (std::size_t k = 0; k < a.grid.values.size(); ++k) {
    max_ab = std::max(max_ab, (a.grid.values[k] - b.grid.values[k]).norm());
    max_ac = std::max(max_ac, (a.grid.values[k] - c.grid.values[k]).norm());
  }
  CHECK(max_ab == 0.0);
  CHECK(max_ac > 0.0);
}

TEST_CASE("disabling jumps does not reshuffle the Wiener draws") {
  // Jump sampling draws from separate counter domains, so a path with a zero
  // jump coefficient must coincide with a path with zero intensity.
  FracSystem with_measure = quiet_linear(-0.3);
  with_measure.sigma.name = "constant";
  with_measure.sigma.params = {0.5};
  with_measure.jumps.intensity = 2.0;  // sampled but unused: g stays "zero"

  FracSystem no_measure = with_measure;
  no_measure.jumps.intensity = 0.0;

  Trajectory a = simulate_path(with_measure, 0.01, RngStream{21, 0});
  Trajectory b = simulate_path(no_measure, 0.01, RngStream{21, 0});
  for (std::size_t k = 0; k < a.grid.values.size(); ++k) {
    CHECK((a.grid.values[k] - b.grid.values[k]).norm() == 0.0);
  }
}

TEST_CASE("jump events perturb the path and are deferred exactly once each") {
  FracSystem sys = quiet_linear(-0.3);
  sys.g.name = "constant";
  sys.g.params = {0.4};
  sys.jumps.intensity = 5.0;

  // Find a stream with at least one event to make the comparison meaningful.
  Trajectory traj = simulate_path(sys, 0.01, RngStream{33, 2});
  std::uint64_t tries = 2;
  while (traj.jumps.empty() && tries < 20) {
    traj = simulate_path(sys, 0.01, RngStream{33, ++tries});
  }
  REQUIRE(!traj.jumps.empty());
  CHECK(traj.scheme_meta.jump_events == traj.jumps.size());
  // Each event falls within one step of exactly one grid point.
  CHECK(traj.scheme_meta.deferred_jump_evals == traj.jumps.size());

  FracSystem quiet = sys;
  quiet.jumps.intensity = 0.0;
  Trajectory base = simulate_path(quiet, 0.01, RngStream{33, tries});
  double diff = 0.0;
  for (std::size_t k = 0; k < base.grid.values.size(); ++k) {
    diff = std::max(diff, (traj.grid.values[k] - base.grid.values[k]).norm());
  }
  CHECK(diff > 0.0);
}

//======================== validation and the benchmark system ===============

TEST_CASE("simulate_path validation") {
  FracSystem sys = quiet_linear(-0.3);
  CHECK_THROWS_AS(simulate_path(sys, 0.3, RngStream{1, 0}), DomainError);
  CHECK_THROWS_AS(simulate_path(sys, 0.0, RngStream{1, 0}), DomainError);

  FracSystem bad_order = sys;
  bad_order.q = 0.3;
  CHECK_THROWS_AS(simulate_path(bad_order, 0.01, RngStream{1, 0}), DomainError);
  bad_order.allow_any_order = true;
  CHECK_NOTHROW(simulate_path(bad_order, 0.01, RngStream{1, 0}));

  FracSystem classical = sys;
  classical.q = 0.999;
  classical.allow_any_order = true;
  CHECK_NOTHROW(simulate_path(classical, 0.01, RngStream{1, 0}));
}

TEST_CASE("reference system shape") {
  FracSystem sys = reference_system();
  CHECK(sys.n == 2);
  CHECK(sys.q == 0.6);
  CHECK(sys.T == 1.0);
  CHECK(sys.f.name == "crossed_quadratic");
  CHECK(sys.sigma.name == "diagonal_multiplicative");
  CHECK(sys.sigma.params[0] == -9.8);
  CHECK(sys.sigma.params[1] == -10.0);
  CHECK(sys.g.name == "ramped_exp_over_mark");
  CHECK(sys.jumps.intensity == 1.0);
  CHECK(sys.validate().empty());  // unit marks, in-range order: no warnings
}

TEST_CASE("reference simulation either completes or reports divergence") {
  // The benchmark's multiplicative noise amplifies the mean square strongly;
  // individual paths may blow past the trust region, which must surface as
  // DivergenceError rather than silent nonfinite values.
  try {
    Trajectory traj = simulate_reference(0.01, RngStream{4, 0});
    for (const auto& x : traj.grid.values) CHECK(x.allFinite());
  } catch (const DivergenceError& e) {
    CHECK(e.step() >= 1);
    CHECK(e.time() > 0.0);
  }
}
