// Counter-based random number generation: every draw is a pure hash of
// (seed, stream_id, domain, counter), so parallel paths reproduce bit-for-bit
// regardless of scheduling, and draw kinds live in disjoint counter domains
// (consuming Wiener draws never shifts jump draws and vice versa).
#pragma once

#include <cstdint>

namespace fracstab {

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Draw domains: fixed counter-space partitions per stream.
enum class RngDomain : std::uint64_t {
  wiener = 0,
  jump_count = 1,
  jump_times = 2,
  jump_marks = 3,
  generic = 4,
};

// Stateless counter hash; the building block everything else uses.
std::uint64_t rng_raw(const RngStream& stream, RngDomain domain,
                      std::uint64_t counter);

// Uniform on the open interval (0,1): never returns 0 or 1.
double rng_uniform(const RngStream& stream, RngDomain domain,
                   std::uint64_t counter);

// Standard normal via the AS241 inverse-CDF (double precision accurate).
double rng_normal(const RngStream& stream, RngDomain domain,
                  std::uint64_t counter);

// Poisson(mean) by CDF inversion; splits means above 60 into chunks for
// numerical stability. Consumes ceil(mean/60) counters starting at `counter`;
// the number consumed is written to *used so callers can advance.
long rng_poisson(const RngStream& stream, RngDomain domain,
                 std::uint64_t counter, double mean, std::uint64_t* used);

// Inverse standard-normal CDF (Wichura's AS241 PPND16), exposed for tests.
double inverse_normal_cdf(double u);

}  // namespace fracstab
