#include "fracstab/mittag_leffler.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "doctest.h"
#include "fracstab/errors.hpp"
#include "fracstab/gammafn.hpp"
#include "ml_oracle.hpp"

using namespace fracstab;

TEST_CASE("ml_scalar classical special cases") {
  CHECK(ml_scalar(1, 1, {1.0, 0.0}).value.real() ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(ml_scalar(2, 1, {-1.0, 0.0}).value.real() ==
        doctest::Approx(std::cos(1.0)).epsilon(1e-13));
}

TEST_CASE("ml_scalar exponential and cosine identities across [-10,10]") {
  for (int i = 0; i <= 100; ++i) {
    double z = -10.0 + 0.2 * i;
    auto e = ml_scalar(1, 1, {z, 0.0});
    CHECK(std::fabs(e.value.real() - std::exp(z)) <= 1e-10);
    CHECK(std::fabs(e.value.imag()) <= 1e-12);
    auto c = ml_scalar(2, 1, {-z * z, 0.0});
    CHECK(std::fabs(c.value.real() - std::cos(z)) <= 1e-10);
  }
}

TEST_CASE("ml_scalar at zero equals 1/Gamma(p)") {
  const double qs[] = {0.3, 0.6, 0.75, 1.0, 1.5, 2.0};
  const double ps[] = {0.4, 0.6, 1.0, 1.3, 2.0, 3.5};
  for (double q : qs) {
    for (double p : ps) {
      auto e = ml_scalar(q, p, {0.0, 0.0});
      CHECK(std::fabs(e.value.real() -
                      static_cast<double>(reciprocal_gamma(p))) <= 1e-14);
      CHECK(e.value.imag() == 0.0);
      CHECK(e.truncation_bound >= 0.0);
      CHECK(e.terms_used >= 1);
    }
  }
}

TEST_CASE("ml_scalar agrees with the independent extended-precision oracle") {
  // Small and moderate arguments where the plain series oracle is reliable.
  const double qs[] = {0.55, 0.6, 0.8, 0.95};
  const double ps[] = {0.6, 1.0, 1.4};
  for (double q : qs) {
    for (double p : ps) {
      for (double z = -3.5; z <= 3.5; z += 0.7) {
        double want = ml_oracle::series_real(q, p, z);
        double got = ml_scalar(q, p, {z, 0.0}).value.real();
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("ml_scalar matches frozen high-precision references") {
  int n = 0;
  const ml_oracle::FrozenCase* cases = ml_oracle::frozen_cases(&n);
  for (int i = 0; i < n; ++i) {
    const auto& c = cases[i];
    auto e = ml_scalar(c.q, c.p, {c.z_re, c.z_im});
    double mag = std::hypot(c.value_re, c.value_im);
    CHECK(std::abs(e.value - std::complex<double>(c.value_re, c.value_im)) <=
          c.rel_tol * mag);
  }
}

TEST_CASE("ml_scalar series and contour branches agree at the crossover") {
  // Force each branch with the crossover option and compare head-to-head.
  MLOptions force_series;
  force_series.series_crossover = 20.0;  // capped internally at 14^q anyway
  MLOptions force_contour;
  force_contour.series_crossover = 0.5;
  const double qs[] = {0.6, 0.9, 1.0};
  for (double q : qs) {
    for (double p : {0.6, 1.0, 1.7}) {
      for (double z : {-4.5, -2.0, 1.5, 3.9}) {
        auto a = ml_scalar(q, p, {z, 0.0}, force_series);
        auto b = ml_scalar(q, p, {z, 0.0}, force_contour);
        CHECK(a.value.real() ==
              doctest::Approx(b.value.real()).epsilon(5e-12));
      }
    }
  }
}

TEST_CASE("ml_scalar complete monotonicity on the negative axis") {
  for (double q : {0.4, 0.6, 0.8, 1.0}) {
    double prev = 1.0;
    for (double x = 0.0; x <= 50.0; x += 0.5) {
      double v = ml_scalar(q, 1, {-x, 0.0}).value.real();
      CHECK(v > 0.0);
      CHECK(v <= 1.0 + 1e-14);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("ml_scalar input validation") {
  CHECK_THROWS_AS(ml_scalar(0.0, 1, {1, 0}), DomainError);
  CHECK_THROWS_AS(ml_scalar(-0.5, 1, {1, 0}), DomainError);
  CHECK_THROWS_AS(ml_scalar(1, 0.0, {1, 0}), DomainError);
  CHECK_THROWS_AS(
      ml_scalar(1, 1, {std::numeric_limits<double>::infinity(), 0}),
      DomainError);
  CHECK_THROWS_AS(ml_scalar(1, 1, {std::nan(""), 0}), DomainError);
}

TEST_CASE("ml_scalar reports honest bounds") {
  auto e = ml_scalar(0.6, 1, {-2.0, 0.0});
  CHECK(e.truncation_bound >= 0.0);
  CHECK(e.truncation_bound <= 1e-12 * std::max(1.0, std::abs(e.value)));
}

//======================== matrix ===========================================

TEST_CASE("ml_matrix diagonal route equals elementwise scalar exactly") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = -0.1;
  A(1, 1) = -0.1;
  Eigen::MatrixXd E = ml_matrix(0.6, 1, A, 1.0);
  double want = ml_scalar(0.6, 1, {-0.1, 0.0}).value.real();
  CHECK(E(0, 0) == want);
  CHECK(E(1, 1) == want);
  CHECK(E(0, 1) == 0.0);
  CHECK(E(1, 0) == 0.0);
}

TEST_CASE("ml_matrix zero matrix gives I/Gamma(p)") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  for (double p : {0.6, 1.0, 2.3}) {
    Eigen::MatrixXd E = ml_matrix(0.7, p, A, 4.2);
    double want = static_cast<double>(reciprocal_gamma(p));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(E(i, j) == doctest::Approx(i == j ? want : 0.0)
                             .epsilon(1e-14)
                             .scale(1.0));
      }
    }
  }
}

TEST_CASE("ml_matrix matrix exponential case") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = -0.1;
  A(1, 1) = -0.1;
  Eigen::MatrixXd E = ml_matrix(1, 1, A, 2.0);
  CHECK(E(0, 0) == doctest::Approx(std::exp(-0.2)).epsilon(1e-13));
  CHECK(E(1, 1) == doctest::Approx(std::exp(-0.2)).epsilon(1e-13));
}

TEST_CASE("ml_matrix eigen route matches scalar results after similarity") {
  // B = P D P^{-1} with D diagonal: E(B t) = P E(D t) P^{-1}.
  Eigen::MatrixXd P(2, 2);
  P << 1.0, 1.0, 0.5, -1.5;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = -0.4;
  D(1, 1) = -1.3;
  Eigen::MatrixXd B = P * D * P.inverse();
  Eigen::MatrixXd got = ml_matrix(0.6, 0.6, B, 0.8);
  Eigen::MatrixXd want = P * ml_matrix(0.6, 0.6, D, 0.8) * P.inverse();
  CHECK((got - want).norm() <= 1e-10 * want.norm());
}

TEST_CASE("ml_matrix complex eigenvalue pair stays real") {
  Eigen::MatrixXd A(2, 2);
  A << -0.3, 1.0, -1.0, -0.3;  // eigenvalues -0.3 +- i
  Eigen::MatrixXd got = ml_matrix(0.7, 1.0, A, 1.0);
  // Cross-check against the power-series route on the same argument.
  MLMatrixEvaluator ev(A);
  CHECK(ev.route() == "eigen");
  // Independent check: q=1 reduces to the matrix exponential, which for this
  // rotation-plus-damping block is e^{-0.3} [[cos 1, sin 1], [-sin 1, cos 1]].
  Eigen::MatrixXd expm = ml_matrix(1.0, 1.0, A, 1.0);
  Eigen::MatrixXd expm_ref(2, 2);
  expm_ref << std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0);
  expm_ref *= std::exp(-0.3);
  CHECK((expm - expm_ref).norm() <= 1e-11 * expm_ref.norm());
  CHECK(std::isfinite(got.norm()));
}

TEST_CASE("ml_matrix defective matrix falls back to the power series") {
  // Jordan block J = lambda I + N: E(J s) = E(lambda s) I + E'(lambda s) s N.
  Eigen::MatrixXd J(2, 2);
  J << -0.5, 1.0, 0.0, -0.5;
  MLMatrixEvaluator ev(J);
  CHECK(ev.route() == "series");
  double s = 1.0;
  Eigen::MatrixXd got = ev.eval(0.6, 0.6, s);
  const double e = 0.31922307382676063;    // E_{0.6,0.6}(-0.5), frozen
  const double ep = 0.43411079128344554;   // E'_{0.6,0.6}(-0.5), frozen
  CHECK(got(0, 0) == doctest::Approx(e).epsilon(1e-10));
  CHECK(got(1, 1) == doctest::Approx(e).epsilon(1e-10));
  CHECK(got(0, 1) == doctest::Approx(ep * s).epsilon(1e-9));
  CHECK(got(1, 0) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("ml_matrix validation") {
  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(ml_matrix(0.6, 1, bad, 1.0), DomainError);
  Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(ml_matrix(0.6, 1, ok, -1.0), DomainError);
}

//======================== envelope =========================================

TEST_CASE("fit_envelope classical exponential gives N=1, omega=spectral rate") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = -0.1;
  A(1, 1) = -0.1;
  // q in (0,1) is required; q near 1 approximates the pure exponential.
  MLEnvelope env = fit_envelope(0.999, 1.0, A, 1.0, 100);
  CHECK(env.n_const == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(env.omega == doctest::Approx(0.1).epsilon(2e-2));
  CHECK(env.max_violation <= 0.0);
}

TEST_CASE("fit_envelope certifies the bound on the refined grid") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = -0.1;
  A(1, 1) = -0.1;
  MLEnvelope env = fit_envelope(0.6, 0.6, A, 1.0, 100);
  CHECK(env.n_const >= 1.0);
  CHECK(env.omega > 0.0);
  CHECK(env.omega <= 0.1 + 1e-12);
  CHECK(env.max_violation <= 0.0);
  // Independent pointwise verification.
  for (int i = 0; i <= 333; ++i) {
    double t = i / 333.0;
    Eigen::MatrixXd E = ml_matrix(0.6, 0.6, A, std::pow(t, 0.6));
    double norm = E.jacobiSvd().singularValues()(0);
    CHECK(norm <= env.n_const * std::exp(-env.omega * t) * (1.0 + 1e-9));
  }
}

TEST_CASE("fit_envelope rejects unstable A") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
  A(0, 0) = +0.1;
  A(1, 1) = -0.1;
  CHECK_THROWS_AS(fit_envelope(0.6, 1.0, A, 1.0, 50), DomainError);
}

//======================== Laplace identity =================================

TEST_CASE("laplace_residual classical exponential case") {
  CHECK(laplace_residual(1, 1, -1, 1) <= 1e-8);
}

TEST_CASE("laplace_residual across the parameter matrix") {
  struct Case {
    double q, p, a, s;
  };
  const Case cases[] = {
      {0.6, 0.6, -0.1, 2.0}, {0.6, 0.6, -0.1, 1.0}, {0.6, 1.0, -1.0, 1.0},
      {0.6, 1.0, -5.0, 2.0}, {0.75, 1.0, -0.5, 1.0}, {0.75, 0.8, -2.0, 1.5},
      {0.9, 0.9, -1.0, 1.0}, {0.9, 1.2, -3.0, 2.0},  {1.0, 1.0, -1.0, 1.0},
      {1.0, 2.0, -0.7, 1.2}, {0.55, 0.55, -0.3, 1.0}, {0.7, 1.5, -1.5, 1.1},
      {0.8, 1.0, 0.5, 2.0},  {0.75, 1.0, 0.25, 1.5}, {0.6, 1.4, -4.0, 3.0},
      {0.65, 0.7, -0.2, 0.8}, {0.85, 1.1, -6.0, 2.5}, {0.95, 1.0, -2.5, 1.4},
      {0.6, 2.0, -1.0, 1.0}, {0.7, 0.6, -0.9, 1.3},
  };
  for (const auto& c : cases) {
    CAPTURE(c.q);
    CAPTURE(c.p);
    CAPTURE(c.a);
    CAPTURE(c.s);
    CHECK(laplace_residual(c.q, c.p, c.a, c.s) <= 1e-6);
  }
}

TEST_CASE("laplace_residual domain errors") {
  CHECK_THROWS_AS(laplace_residual(0.5, 1, 1.0, 1.0), DomainError);  // s^q = a
  CHECK_THROWS_AS(laplace_residual(0.6, 1, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(laplace_residual(0.6, 1, 5.0, 1.0), DomainError);
}
