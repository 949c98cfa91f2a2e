#include "fracstab/system.hpp"

#include <cmath>

#include "fracstab/errors.hpp"

namespace fracstab {

std::vector<std::string> FracSystem::validate() const {
  if (n <= 0) throw DomainError("system dimension must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("horizon T must be finite and > 0");
  if (!std::isfinite(q)) throw DomainError("order q must be finite");
  if (allow_any_order) {
    if (!(q > 0.0) || !(q <= 1.0)) {
      throw DomainError("order q must lie in (0, 1] even with the range override");
    }
  } else if (!(q > 0.5) || !(q < 1.0)) {
    throw DomainError(
        "order q must lie in (1/2, 1); set allow_any_order to simulate outside it");
  }
  if (A.rows() != n || A.cols() != n) {
    throw DomainError("linear part A must be n-by-n");
  }
  if (!A.allFinite()) throw DomainError("linear part A has nonfinite entries");
  if (x0.size() != n) throw DomainError("initial state must have dimension n");
  if (!x0.allFinite()) throw DomainError("initial state has nonfinite entries");

  // Construct each coefficient to surface name/arity errors eagerly.
  make_drift(f, n);
  make_sigma(sigma, n);
  make_jump(g, n);

  std::vector<std::string> warnings = jumps.validate();
  if (allow_any_order && !(q > 0.5 && q < 1.0)) {
    warnings.push_back("order q is outside (1/2, 1); certificates do not apply");
  }
  return warnings;
}

}  // namespace fracstab
