#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracstab/errors.hpp"
#include "fracstab/rng.hpp"
#include "fracstab/stochastic.hpp"

using namespace fracstab;

//======================== counter-based generator ===========================

TEST_CASE("inverse_normal_cdf matches frozen references") {
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) ==
        doctest::Approx(1.9599639845400542).epsilon(1e-14));
  CHECK(inverse_normal_cdf(0.3) ==
        doctest::Approx(-0.52440051270804078).epsilon(1e-14));
  CHECK(inverse_normal_cdf(1e-9) ==
        doctest::Approx(-5.9978070150076869).epsilon(1e-13));
  // 1.0 - 1e-9 rounds to a different probability than the lower-tail double,
  // so its inverse is not the mirror image of the previous case.
  CHECK(inverse_normal_cdf(1.0 - 1e-9) ==
        doctest::Approx(5.9978070196016374).epsilon(1e-13));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), DomainError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), DomainError);
}

TEST_CASE("rng_uniform stays in the open unit interval and is reproducible") {
  const RngStream stream{123, 4};
  for (std::uint64_t c = 0; c < 2000; ++c) {
    const double u = rng_uniform(stream, RngDomain::generic, c);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(u == rng_uniform(stream, RngDomain::generic, c));
  }
  // Distinct coordinates decorrelate.
  CHECK(rng_uniform(stream, RngDomain::generic, 0) !=
        rng_uniform(stream, RngDomain::wiener, 0));
  CHECK(rng_uniform(stream, RngDomain::generic, 0) !=
        rng_uniform(RngStream{123, 5}, RngDomain::generic, 0));
  CHECK(rng_uniform(stream, RngDomain::generic, 0) !=
        rng_uniform(RngStream{124, 4}, RngDomain::generic, 0));
}

TEST_CASE("rng_normal first two moments") {
  const RngStream stream{2024, 0};
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int c = 0; c < n; ++c) {
    const double x = rng_normal(stream, RngDomain::generic, c);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) <= 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("rng_poisson sample mean and chunked additivity") {
  const RngStream stream{77, 1};
  {
    const double mean = 3.7;
    const int n = 50000;
    double sum = 0.0;
    std::uint64_t counter = 0;
    for (int i = 0; i < n; ++i) {
      std::uint64_t used = 0;
      sum += static_cast<double>(
          rng_poisson(stream, RngDomain::generic, counter, mean, &used));
      CHECK(used >= 1);
      counter += used;
    }
    CHECK(std::abs(sum / n - mean) <= 4.0 * std::sqrt(mean / n));
  }
  {
    // Means above the chunk size are split additively; the law must survive.
    const double mean = 150.0;
    const int n = 20000;
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t counter = 0;
    for (int i = 0; i < n; ++i) {
      std::uint64_t used = 0;
      const double x = static_cast<double>(
          rng_poisson(stream, RngDomain::jump_count, counter, mean, &used));
      sum += x;
      sum_sq += x * x;
      counter += used;
    }
    const double m = sum / n;
    const double var = sum_sq / n - m * m;
    CHECK(std::abs(m - mean) <= 4.0 * std::sqrt(mean / n));
    CHECK(std::abs(var - mean) / mean <= 0.1);
  }
}

//======================== jump sampling =====================================

TEST_CASE("sample_jumps is deterministic, sorted, and in range") {
  JumpMeasure measure;
  measure.intensity = 3.0;
  measure.marks.kind = MarkFamily::Kind::uniform;
  measure.marks.lower = 0.5;
  measure.marks.upper = 1.5;

  const RngStream stream{5, 9};
  auto a = sample_jumps(measure, 2.0, stream);
  auto b = sample_jumps(measure, 2.0, stream);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].time == b[i].time);
    CHECK(a[i].mark == b[i].mark);
    CHECK(a[i].time >= 0.0);
    CHECK(a[i].time <= 2.0);
    CHECK(a[i].mark >= 0.5);
    CHECK(a[i].mark < 1.5);
    if (i > 0) CHECK(a[i].time >= a[i - 1].time);
  }
}

TEST_CASE("sample_jumps count follows the intensity") {
  JumpMeasure measure;
  measure.intensity = 4.0;
  measure.marks.values = {2.0};
  measure.marks.probs = {1.0};
  const double horizon = 1.5;
  const int reps = 2000;
  double total = 0.0;
  for (int p = 0; p < reps; ++p) {
    const auto events = sample_jumps(measure, horizon, RngStream{31, (std::uint64_t)p});
    total += static_cast<double>(events.size());
    for (const auto& e : events) CHECK(e.mark == 2.0);
  }
  const double mean = measure.intensity * horizon;
  CHECK(std::abs(total / reps - mean) <= 4.0 * std::sqrt(mean / reps));
}

TEST_CASE("sample_jumps with zero intensity is empty") {
  JumpMeasure measure;
  CHECK(sample_jumps(measure, 1.0, RngStream{1, 1}).empty());
}

TEST_CASE("jump measure validation") {
  JumpMeasure measure;
  measure.intensity = -1.0;
  CHECK_THROWS_AS(measure.validate(), DomainError);

  measure.intensity = 1.0;
  measure.marks.probs = {0.4, 0.4};  // sizes differ
  CHECK_THROWS_AS(measure.validate(), DomainError);

  measure.marks.values = {1.0, 2.0};
  measure.marks.probs = {0.4, 0.4};  // sums to 0.8
  CHECK_THROWS_AS(measure.validate(), DomainError);

  measure.marks.probs = {0.5, 0.5};
  CHECK(measure.validate().empty());

  // Nonpositive-support warnings are soft but never silent.
  JumpMeasure negative;
  negative.intensity = 1.0;
  negative.marks.values = {-1.0};
  negative.marks.probs = {1.0};
  CHECK(!negative.validate().empty());

  JumpMeasure gauss;
  gauss.intensity = 1.0;
  gauss.marks.kind = MarkFamily::Kind::gaussian;
  gauss.marks.mean = 5.0;
  gauss.marks.sd = 1.0;
  CHECK(!gauss.validate().empty());

  JumpMeasure bad_uniform;
  bad_uniform.intensity = 1.0;
  bad_uniform.marks.kind = MarkFamily::Kind::uniform;
  bad_uniform.marks.lower = 2.0;
  bad_uniform.marks.upper = 1.0;
  CHECK_THROWS_AS(bad_uniform.validate(), DomainError);
}

//======================== accumulators ======================================

TEST_CASE("wiener_increments shape, scale, and determinism") {
  const RngStream stream{8, 2};
  Eigen::MatrixXd dw = wiener_increments(3, 500, 0.04, stream);
  REQUIRE(dw.rows() == 500);
  REQUIRE(dw.cols() == 3);
  CHECK(dw == wiener_increments(3, 500, 0.04, stream));
  // Var of each entry is h.
  const double var = dw.array().square().sum() / (500.0 * 3.0);
  CHECK(std::abs(var - 0.04) <= 4.0 * 0.04 * std::sqrt(2.0 / 1500.0));
}

TEST_CASE("ito_path matches a direct accumulation") {
  const double h = 0.05;
  const int steps = 40;
  SampledPath x;
  x.h = h;
  for (int k = 0; k <= steps; ++k) {
    Eigen::VectorXd v(2);
    v << std::sin(0.3 * k), std::cos(0.2 * k);
    x.values.push_back(v);
  }
  Eigen::MatrixXd dw = wiener_increments(2, steps, h, RngStream{44, 0});

  NonlinearityHandle sigma;
  sigma.name = "diagonal_multiplicative";
  sigma.params = {0.7, -1.1};
  SampledPath ito = ito_path(sigma, x, dw);

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(2);
  CHECK(ito.values[0].norm() == 0.0);
  for (int k = 0; k < steps; ++k) {
    acc(0) += 0.7 * x.values[(std::size_t)k](0) * dw(k, 0);
    acc(1) += -1.1 * x.values[(std::size_t)k](1) * dw(k, 1);
    CHECK((ito.values[(std::size_t)k + 1] - acc).norm() <= 1e-15 * (1.0 + acc.norm()));
  }
}

TEST_CASE("mark_average closed forms") {
  // Discrete: plain weighted sum.
  MarkFamily discrete;
  discrete.values = {1.0, 3.0};
  discrete.probs = {0.25, 0.75};
  auto square = [](double eta) {
    Eigen::VectorXd v(1);
    v(0) = eta * eta;
    return v;
  };
  CHECK(mark_average(square, discrete)(0) ==
        doctest::Approx(0.25 * 1.0 + 0.75 * 9.0).epsilon(1e-15));

  // Uniform(0.5, 1.5): E eta^2 = 13/12, E 1/eta = ln 3.
  MarkFamily uniform;
  uniform.kind = MarkFamily::Kind::uniform;
  uniform.lower = 0.5;
  uniform.upper = 1.5;
  CHECK(mark_average(square, uniform)(0) ==
        doctest::Approx(13.0 / 12.0).epsilon(1e-12));
  auto recip = [](double eta) {
    Eigen::VectorXd v(1);
    v(0) = 1.0 / eta;
    return v;
  };
  CHECK(mark_average(recip, uniform)(0) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-10));

  // Gaussian(mu, sd): E eta^2 = mu^2 + sd^2, E eta^4 at mu=0 is 3 sd^4.
  MarkFamily gauss;
  gauss.kind = MarkFamily::Kind::gaussian;
  gauss.mean = 0.4;
  gauss.sd = 0.9;
  CHECK(mark_average(square, gauss)(0) ==
        doctest::Approx(0.4 * 0.4 + 0.9 * 0.9).epsilon(1e-12));
  MarkFamily centered;
  centered.kind = MarkFamily::Kind::gaussian;
  centered.mean = 0.0;
  centered.sd = 0.9;
  auto quartic = [](double eta) {
    Eigen::VectorXd v(1);
    v(0) = eta * eta * eta * eta;
    return v;
  };
  CHECK(mark_average(quartic, centered)(0) ==
        doctest::Approx(3.0 * std::pow(0.9, 4)).epsilon(1e-12));
}

TEST_CASE("compensator_path closed form for a constant jump coefficient") {
  const double h = 0.02, lambda = 2.5;
  SampledPath x;
  x.h = h;
  for (int k = 0; k <= 30; ++k) x.values.push_back(Eigen::VectorXd::Ones(2));

  NonlinearityHandle g;
  g.name = "constant";
  g.params = {0.3, -0.6};
  JumpMeasure measure;
  measure.intensity = lambda;

  SampledPath comp = compensator_path(g, x, measure);
  for (std::size_t k = 0; k < comp.values.size(); ++k) {
    const double t = comp.time_at(k);
    CHECK(comp.values[k](0) == doctest::Approx(lambda * t * 0.3).epsilon(1e-12));
    CHECK(comp.values[k](1) == doctest::Approx(lambda * t * -0.6).epsilon(1e-12));
  }
}

TEST_CASE("compensator_path uses the mark average of the jump coefficient") {
  // g_i = -(c - t) x_i e^{-t} / eta with uniform marks: the eta average
  // contributes E[1/eta] = ln 3 for uniform(0.5, 1.5).
  const double h = 0.1, c = 0.2;
  SampledPath x;
  x.h = h;
  for (int k = 0; k <= 5; ++k) {
    Eigen::VectorXd v(1);
    v(0) = 2.0 + 0.1 * k;
    x.values.push_back(v);
  }
  NonlinearityHandle g;
  g.name = "ramped_exp_over_mark";
  g.params = {c};
  JumpMeasure measure;
  measure.intensity = 1.5;
  measure.marks.kind = MarkFamily::Kind::uniform;
  measure.marks.lower = 0.5;
  measure.marks.upper = 1.5;

  SampledPath comp = compensator_path(g, x, measure);
  double expect = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double t = h * k;
    const double gbar = -(c - t) * x.values[(std::size_t)k](0) * std::exp(-t) *
                        std::log(3.0);
    expect += h * measure.intensity * gbar;
    CHECK(comp.values[(std::size_t)k + 1](0) ==
          doctest::Approx(expect).epsilon(1e-10));
  }
}
