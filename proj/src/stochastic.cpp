#include "fracstab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "fracstab/errors.hpp"

namespace fracstab {
namespace {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;  // normalized to a probability measure
};

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu0 times the squared first eigenvector components.
Quadrature golub_welsch(const std::vector<double>& off_diag, double mu0) {
  const int n = static_cast<int>(off_diag.size()) + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    jacobi(k, k + 1) = off_diag[static_cast<std::size_t>(k)];
    jacobi(k + 1, k) = off_diag[static_cast<std::size_t>(k)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Quadrature quad;
  quad.nodes.resize(static_cast<std::size_t>(n));
  quad.weights.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    quad.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    const double v0 = solver.eigenvectors()(0, k);
    quad.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return quad;
}

const Quadrature& legendre_rule(int n) {
  static const Quadrature rule32 = [] {
    std::vector<double> b;
    for (int k = 1; k < 32; ++k) b.push_back(k / std::sqrt(4.0 * k * k - 1.0));
    Quadrature q = golub_welsch(b, 2.0);
    for (auto& w : q.weights) w *= 0.5;  // uniform probability on [-1, 1]
    return q;
  }();
  static const Quadrature rule64 = [] {
    std::vector<double> b;
    for (int k = 1; k < 64; ++k) b.push_back(k / std::sqrt(4.0 * k * k - 1.0));
    Quadrature q = golub_welsch(b, 2.0);
    for (auto& w : q.weights) w *= 0.5;
    return q;
  }();
  return n == 32 ? rule32 : rule64;
}

const Quadrature& hermite_rule(int n) {
  static const Quadrature rule32 = [] {
    std::vector<double> b;
    for (int k = 1; k < 32; ++k) b.push_back(std::sqrt(k / 2.0));
    Quadrature q = golub_welsch(b, std::sqrt(M_PI));
    for (auto& w : q.weights) w /= std::sqrt(M_PI);  // standard normal measure
    return q;
  }();
  static const Quadrature rule64 = [] {
    std::vector<double> b;
    for (int k = 1; k < 64; ++k) b.push_back(std::sqrt(k / 2.0));
    Quadrature q = golub_welsch(b, std::sqrt(M_PI));
    for (auto& w : q.weights) w /= std::sqrt(M_PI);
    return q;
  }();
  return n == 32 ? rule32 : rule64;
}

Eigen::VectorXd quadrature_mean(const std::function<Eigen::VectorXd(double)>& integrand,
                                const MarkFamily& family, int nodes) {
  const bool uniform = family.kind == MarkFamily::Kind::uniform;
  const Quadrature& rule = uniform ? legendre_rule(nodes) : hermite_rule(nodes);
  Eigen::VectorXd acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double eta;
    if (uniform) {
      eta = 0.5 * (family.lower + family.upper) +
            0.5 * (family.upper - family.lower) * rule.nodes[i];
    } else {
      eta = family.mean + family.sd * std::sqrt(2.0) * rule.nodes[i];
    }
    Eigen::VectorXd value = rule.weights[i] * integrand(eta);
    if (acc.size() == 0) {
      acc = value;
    } else {
      acc += value;
    }
  }
  return acc;
}

}  // namespace

std::vector<std::string> JumpMeasure::validate() const {
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw DomainError("jump intensity must be finite and >= 0");
  }
  std::vector<std::string> warnings;
  bool nonpositive_marks = false;
  switch (marks.kind) {
    case MarkFamily::Kind::discrete: {
      if (marks.values.empty() || marks.values.size() != marks.probs.size()) {
        throw DomainError("discrete mark family needs matching values/probs");
      }
      double total = 0.0;
      for (double p : marks.probs) {
        if (!(p >= 0.0)) throw DomainError("discrete mark probabilities must be >= 0");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("discrete mark probabilities must sum to 1");
      }
      for (std::size_t i = 0; i < marks.values.size(); ++i) {
        if (marks.values[i] <= 0.0 && marks.probs[i] > 0.0) nonpositive_marks = true;
      }
      break;
    }
    case MarkFamily::Kind::uniform:
      if (!(marks.lower < marks.upper)) {
        throw DomainError("uniform mark family needs lower < upper");
      }
      nonpositive_marks = marks.lower <= 0.0;
      break;
    case MarkFamily::Kind::gaussian:
      if (!(marks.sd > 0.0)) throw DomainError("gaussian mark family needs sd > 0");
      nonpositive_marks = true;
      break;
  }
  if (nonpositive_marks && intensity > 0.0) {
    warnings.push_back(
        "mark family assigns probability to nonpositive marks; jump coefficients "
        "that divide by the mark will reject or amplify such events");
  }
  return warnings;
}

Eigen::MatrixXd wiener_increments(int dim, int steps, double h,
                                  const RngStream& stream) {
  if (dim <= 0 || steps < 0) throw DomainError("wiener increments need dim > 0, steps >= 0");
  if (!(h > 0.0)) throw DomainError("wiener increments need h > 0");
  const double root_h = std::sqrt(h);
  Eigen::MatrixXd out(steps, dim);
  for (int k = 0; k < steps; ++k) {
    for (int i = 0; i < dim; ++i) {
      const std::uint64_t counter =
          static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(dim) +
          static_cast<std::uint64_t>(i);
      out(k, i) = root_h * rng_normal(stream, RngDomain::wiener, counter);
    }
  }
  return out;
}

std::vector<JumpRecord> sample_jumps(const JumpMeasure& measure, double horizon,
                                     const RngStream& stream) {
  if (!(horizon > 0.0)) throw DomainError("jump sampling needs horizon > 0");
  measure.validate();
  if (measure.intensity == 0.0) return {};

  std::uint64_t used = 0;
  const std::uint64_t count =
      rng_poisson(stream, RngDomain::jump_count, 0, measure.intensity * horizon, &used);

  std::vector<JumpRecord> records(count);
  for (std::uint64_t j = 0; j < count; ++j) {
    records[j].time = horizon * rng_uniform(stream, RngDomain::jump_times, j);
    const double u = rng_uniform(stream, RngDomain::jump_marks, j);
    switch (measure.marks.kind) {
      case MarkFamily::Kind::discrete: {
        double cdf = 0.0;
        std::size_t pick = measure.marks.values.size() - 1;
        for (std::size_t i = 0; i < measure.marks.probs.size(); ++i) {
          cdf += measure.marks.probs[i];
          if (u <= cdf) {
            pick = i;
            break;
          }
        }
        records[j].mark = measure.marks.values[pick];
        break;
      }
      case MarkFamily::Kind::uniform:
        records[j].mark =
            measure.marks.lower + (measure.marks.upper - measure.marks.lower) * u;
        break;
      case MarkFamily::Kind::gaussian:
        records[j].mark = measure.marks.mean + measure.marks.sd * inverse_normal_cdf(u);
        break;
    }
  }
  std::sort(records.begin(), records.end(),
            [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
  return records;
}

SampledPath ito_path(const NonlinearityHandle& sigma_spec, const SampledPath& x_path,
                     const Eigen::MatrixXd& dW) {
  x_path.validate();
  const int n = x_path.dimension();
  const std::size_t count = x_path.values.size();
  if (dW.cols() != n || dW.rows() + 1 < static_cast<Eigen::Index>(count)) {
    throw DomainError("wiener increment matrix does not cover the sampled path");
  }
  auto sigma = make_sigma(sigma_spec, n);

  SampledPath out;
  out.h = x_path.h;
  out.values.assign(count, Eigen::VectorXd::Zero(n));
  for (std::size_t k = 0; k + 1 < count; ++k) {
    const double t = x_path.time_at(k);
    out.values[k + 1] =
        out.values[k] +
        sigma(t, x_path.values[k]) * dW.row(static_cast<Eigen::Index>(k)).transpose();
  }
  return out;
}

Eigen::VectorXd mark_average(const std::function<Eigen::VectorXd(double)>& integrand,
                             const MarkFamily& family) {
  if (family.kind == MarkFamily::Kind::discrete) {
    Eigen::VectorXd acc;
    for (std::size_t i = 0; i < family.values.size(); ++i) {
      Eigen::VectorXd value = family.probs[i] * integrand(family.values[i]);
      if (acc.size() == 0) {
        acc = value;
      } else {
        acc += value;
      }
    }
    return acc;
  }
  Eigen::VectorXd coarse = quadrature_mean(integrand, family, 32);
  Eigen::VectorXd fine = quadrature_mean(integrand, family, 64);
  const double diff = (fine - coarse).norm();
  const double bound = 1e-8 * std::max(1.0, fine.norm());
  if (diff > bound) {
    throw AccuracyError("mark average quadrature did not converge", diff);
  }
  return fine;
}

SampledPath compensator_path(const NonlinearityHandle& g_spec,
                             const SampledPath& x_path, const JumpMeasure& measure) {
  x_path.validate();
  measure.validate();
  const int n = x_path.dimension();
  const std::size_t count = x_path.values.size();
  auto g = make_jump(g_spec, n);

  SampledPath out;
  out.h = x_path.h;
  out.values.assign(count, Eigen::VectorXd::Zero(n));
  if (measure.intensity == 0.0 || g_spec.name == "zero") return out;

  for (std::size_t k = 0; k + 1 < count; ++k) {
    const double t = x_path.time_at(k);
    const Eigen::VectorXd& x = x_path.values[k];
    Eigen::VectorXd mean =
        mark_average([&](double eta) { return g(t, x, eta); }, measure.marks);
    out.values[k + 1] = out.values[k] + x_path.h * measure.intensity * mean;
  }
  return out;
}

}  // namespace fracstab
