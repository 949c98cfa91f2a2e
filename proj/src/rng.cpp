#include "fracstab/rng.hpp"

#include <cmath>
#include <sstream>

#include "fracstab/errors.hpp"

namespace fracstab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

std::uint64_t rng_raw(const RngStream& stream, RngDomain domain,
                      std::uint64_t counter) {
  // Equivalent to running splitmix64 from a per-(seed,stream,domain) base:
  // out_c = mix(base + golden * c), which passes the usual statistical
  // batteries; distinct bases give overlap probability ~ 2^-64.
  std::uint64_t base = mix64(stream.seed + kGolden);
  base = mix64(base ^ (stream.stream_id + kGolden));
  base = mix64(base ^ (static_cast<std::uint64_t>(domain) + kGolden));
  return mix64(base + kGolden * (counter + 1));
}

double rng_uniform(const RngStream& stream, RngDomain domain,
                   std::uint64_t counter) {
  std::uint64_t bits = rng_raw(stream, domain, counter) >> 11;  // top 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double u) {
  // Wichura (1988), algorithm AS241, PPND16: relative error ~1e-16.
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << "inverse_normal_cdf: u must lie in (0,1), got " << u;
    throw DomainError(msg.str());
  }
  const double q = u - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) *
                     r + 6.7265770927008700853e+4) * r +
                 4.5921953931549871457e+4) * r + 1.3731693765509461125e+4) *
                   r + 1.9715909503065514427e+3) * r +
               1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) *
                     r + 3.9307895800092710610e+4) * r +
                 2.1213794301586595867e+4) * r + 5.3941960214247511077e+3) *
                   r + 6.8718700749205790830e+2) * r +
               4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? u : 1.0 - u;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) *
                  r + 2.41780725177450611770e-1) * r +
              1.27045825245236838258e+0) * r + 3.64784832476320460504e+0) *
                r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) *
                  r + 1.51986665636164571966e-2) * r +
              1.48103976427480074590e-1) * r + 6.89767334985100004550e-1) *
                r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) *
                  r + 1.24266094738807843860e-3) * r +
              2.65321895265761230930e-2) * r + 2.96560571828504891230e-1) *
                r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r + 1.84631831751005468180e-5) * r +
              7.86869131145613259100e-4) * r + 1.48753612908506148525e-2) *
                r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -value : value;
}

double rng_normal(const RngStream& stream, RngDomain domain,
                  std::uint64_t counter) {
  return inverse_normal_cdf(rng_uniform(stream, domain, counter));
}

namespace {

// Poisson(mean <= 60) from a single uniform by CDF inversion.
long poisson_small(double u, double mean) {
  double p = std::exp(-mean);
  double cum = p;
  long k = 0;
  while (u > cum && k < 4000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cum += p;
  }
  return k;
}

}  // namespace

long rng_poisson(const RngStream& stream, RngDomain domain,
                 std::uint64_t counter, double mean, std::uint64_t* used) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("rng_poisson: mean must be finite and >= 0");
  }
  std::uint64_t n = 0;
  long total = 0;
  double remaining = mean;
  // Poisson additivity: split large means into <= 60 chunks, one uniform each.
  while (remaining > 60.0) {
    total += poisson_small(rng_uniform(stream, domain, counter + n), 60.0);
    ++n;
    remaining -= 60.0;
  }
  if (remaining > 0.0) {
    total += poisson_small(rng_uniform(stream, domain, counter + n), remaining);
    ++n;
  }
  if (used != nullptr) {
    *used = n;
  }
  return total;
}

}  // namespace fracstab
