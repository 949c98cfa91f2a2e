// Test-side Mittag-Leffler oracle: an independent extended-precision direct
// series, deliberately separate from the library implementation, plus
// references frozen from a 50-digit computation. Only valid where the series
// is cancellation-safe (small-to-moderate |z|); larger arguments are covered
// by the frozen references.
#pragma once

#include <cmath>
#include <complex>

namespace ml_oracle {

// Plain long double series, up to 200 terms, no shared code with the library.
inline std::complex<long double> series(long double q, long double p,
                                        std::complex<long double> z) {
  std::complex<long double> sum(0.0L, 0.0L);
  std::complex<long double> zk(1.0L, 0.0L);
  for (int k = 0; k < 200; ++k) {
    long double a = q * k + p;
    sum += zk * std::exp(-std::lgamma(a));
    zk *= z;
  }
  return sum;
}

inline double series_real(double q, double p, double z) {
  return static_cast<double>(
      series(static_cast<long double>(q), static_cast<long double>(p),
             std::complex<long double>(static_cast<long double>(z), 0.0L))
          .real());
}

struct FrozenCase {
  double q, p, z_re, z_im, value_re, value_im, rel_tol;
};

// Frozen 17-digit references (independent 50+ digit series evaluation).
inline const FrozenCase* frozen_cases(int* count) {
  static const FrozenCase cases[] = {
      {0.6, 0.6, -0.1, 0, 0.57257163307038552, 0, 1e-12},
      {0.6, 1.0, -0.1, 0, 0.89659400596900927, 0, 1e-12},
      {0.6, 1.0, -5.0, 0, 0.095117846438754617, 0, 1e-10},
      {0.6, 1.0, -50.0, 0, 0.0090837447731034541, 0, 1e-9},
      {0.6, 1.0, 2.0, 0, 39.692804958505456, 0, 1e-12},
      {0.6, 1.0, 20.0, 0, 1.6597045718457833e+64, 0, 1e-10},
      {0.9, 0.9, -30.0, 0, 0.00011825044794307209, 0, 1e-8},
      {0.75, 1.0, -12.0, 0, 0.025085777706384878, 0, 1e-9},
      {0.5, 1.0, -4.9, 0, 0.11287909055975876, 0, 1e-10},
      {0.999, 1.0, -0.1, 0, 0.90480379077918957, 0, 1e-12},
      {0.6, 1.6, -3.0, 0, 0.28009883991163626, 0, 1e-12},
      {1.5, 2.5, -7.0, 0, 0.17848742578513498, 0, 1e-10},
      {2.0, 1.0, -25.0, 0, 0.28366218546322626, 0, 1e-10},
      {1.0, 1.0, -10.0, 0, 4.5399929762484852e-5, 0, 1e-8},
      {0.7, 1.0, 2.0, 2.0, -6.5767839473202327, -7.1568711627560658, 1e-11},
      {0.7, 1.0, -6.0, 1.0, 0.061199144979121631, 0.011366117307816279, 1e-9},
      {0.6, 0.6, -2.5, -4.0, -0.0069431956321918935, -0.012074266151495741,
       1e-9},
  };
  *count = static_cast<int>(sizeof(cases) / sizeof(cases[0]));
  return cases;
}

}  // namespace ml_oracle
