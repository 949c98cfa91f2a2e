// Gamma-function helpers used by the Mittag-Leffler series and the fractional
// operators. Backed by the C library's long double implementation, which
// delivers the >= 13 significant digits the series coefficients need; accuracy
// is pinned against high-precision references in the test suite.
#pragma once

namespace fracstab {

// Gamma(x) for real x. Throws DomainError at poles (x = 0, -1, -2, ...) and on
// overflow (|Gamma| too large for double).
double gamma_fn(double x);

// 1/Gamma(x) as an entire function: returns 0 at the poles of Gamma. Evaluated
// in long double so series coefficients keep ~18 digits.
long double reciprocal_gamma(long double x);

// log|Gamma(x)| for x > 0.
double log_gamma(double x);

}  // namespace fracstab
