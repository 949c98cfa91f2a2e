#include "fracstab/nonlinearity.hpp"

#include <cmath>
#include <cstddef>

#include "fracstab/errors.hpp"

namespace fracstab {
namespace {

void require_arity(const NonlinearityHandle& handle, std::size_t expected,
                   const char* slot) {
  if (handle.params.size() != expected) {
    throw DomainError(std::string(slot) + " function '" + handle.name +
                      "' expects " + std::to_string(expected) +
                      " parameter(s), got " + std::to_string(handle.params.size()));
  }
}

Eigen::MatrixXd row_major_matrix(const std::vector<double>& params, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = params[static_cast<std::size_t>(i * n + j)];
    }
  }
  return m;
}

[[noreturn]] void unknown_name(const NonlinearityHandle& handle, const char* slot,
                               const char* valid) {
  throw DomainError(std::string("unknown ") + slot + " function '" + handle.name +
                    "'; valid names: " + valid);
}

}  // namespace

DriftFn make_drift(const NonlinearityHandle& handle, int n) {
  if (n <= 0) throw DomainError("drift slot requires positive dimension");
  if (handle.name == "zero") {
    require_arity(handle, 0, "drift");
    return [n](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n); };
  }
  if (handle.name == "linear") {
    require_arity(handle, static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                  "drift");
    Eigen::MatrixXd m = row_major_matrix(handle.params, n);
    return [m](double, const Eigen::VectorXd& x) -> Eigen::VectorXd { return m * x; };
  }
  if (handle.name == "crossed_quadratic") {
    require_arity(handle, 0, "drift");
    if (n != 2) throw DomainError("drift 'crossed_quadratic' requires dimension 2");
    return [](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double denom = std::max(1.0 - t, 1e-6);
      Eigen::VectorXd out(2);
      out(0) = -x(1) * x(1) / denom;
      out(1) = -x(0) * x(0) / denom;
      return out;
    };
  }
  if (handle.name == "saturated_quadratic") {
    require_arity(handle, 1, "drift");
    const double c = handle.params[0];
    return [c](double, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        out(i) = -c * x(i) * x(i) / (1.0 + x(i) * x(i));
      }
      return out;
    };
  }
  unknown_name(handle, "drift", "zero, linear, crossed_quadratic, saturated_quadratic");
}

SigmaFn make_sigma(const NonlinearityHandle& handle, int n) {
  if (n <= 0) throw DomainError("diffusion slot requires positive dimension");
  if (handle.name == "zero") {
    require_arity(handle, 0, "diffusion");
    return [n](double, const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(n, n); };
  }
  if (handle.name == "constant") {
    require_arity(handle, static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                  "diffusion");
    Eigen::MatrixXd m = row_major_matrix(handle.params, n);
    return [m](double, const Eigen::VectorXd&) { return m; };
  }
  if (handle.name == "diagonal_multiplicative") {
    require_arity(handle, static_cast<std::size_t>(n), "diffusion");
    std::vector<double> c = handle.params;
    return [c, n](double, const Eigen::VectorXd& x) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) m(i, i) = c[static_cast<std::size_t>(i)] * x(i);
      return m;
    };
  }
  unknown_name(handle, "diffusion", "zero, constant, diagonal_multiplicative");
}

JumpFn make_jump(const NonlinearityHandle& handle, int n) {
  if (n <= 0) throw DomainError("jump slot requires positive dimension");
  if (handle.name == "zero") {
    require_arity(handle, 0, "jump");
    return [n](double, const Eigen::VectorXd&, double) {
      return Eigen::VectorXd::Zero(n);
    };
  }
  if (handle.name == "constant") {
    require_arity(handle, static_cast<std::size_t>(n), "jump");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = handle.params[static_cast<std::size_t>(i)];
    return [v](double, const Eigen::VectorXd&, double) { return v; };
  }
  if (handle.name == "ramped_exp_over_mark") {
    require_arity(handle, 1, "jump");
    const double c = handle.params[0];
    return [c](double t, const Eigen::VectorXd& x, double eta) -> Eigen::VectorXd {
      if (eta == 0.0) throw DomainError("jump 'ramped_exp_over_mark' needs nonzero mark");
      return (-(c - t) * std::exp(-t) / eta) * x;
    };
  }
  unknown_name(handle, "jump", "zero, constant, ramped_exp_over_mark");
}

}  // namespace fracstab
