#include "fracstab/gammafn.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fracstab/errors.hpp"

namespace fracstab {

double gamma_fn(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gamma_fn: nonfinite argument");
  }
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: pole at nonpositive integer x = " << x;
    throw DomainError(msg.str());
  }
  long double g = std::tgamma(static_cast<long double>(x));
  if (std::fabs(g) > std::numeric_limits<double>::max()) {
    std::ostringstream msg;
    msg << "gamma_fn: overflow at x = " << x;
    throw DomainError(msg.str());
  }
  return static_cast<double>(g);
}

long double reciprocal_gamma(long double x) {
  if (x <= 0.0L && x == std::floor(x)) {
    return 0.0L;  // 1/Gamma is entire with zeros at the poles
  }
  if (x > 1756.0L) {
    return 0.0L;  // Gamma overflows even long double; reciprocal underflows
  }
  if (x > 0.0L) {
    // exp(-lgamma) keeps precision where tgammal would overflow double range.
    if (x > 170.0L) {
      return std::exp(-std::lgamma(x));
    }
    return 1.0L / std::tgamma(x);
  }
  // Reflection: 1/Gamma(x) = sin(pi x) * Gamma(1-x) / pi.
  long double s = std::sin(static_cast<long double>(M_PI) * x);
  return s * std::exp(std::lgamma(1.0L - x)) / static_cast<long double>(M_PI);
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: requires x > 0");
  }
  return static_cast<double>(std::lgamma(static_cast<long double>(x)));
}

}  // namespace fracstab
