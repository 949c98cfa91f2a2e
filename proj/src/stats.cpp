#include "fracstab/stats.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <thread>

#include "fracstab/errors.hpp"
#include "fracstab/solver.hpp"

namespace fracstab {
namespace {

constexpr double kNormal975 = 1.959963984540054;

template <typename Fn>
void parallel_for(int count, Fn&& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      std::min<unsigned>(std::max(1u, hw), static_cast<unsigned>(std::max(1, count)));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace

EnsembleStats run_ensemble(const FracSystem& system, double h, int paths,
                           std::uint64_t seed) {
  if (paths < 2) throw DomainError("ensemble needs at least 2 paths");
  system.validate();

  // Per-path squared norms; slot p is written only by the worker that owns
  // path p, and reduction happens sequentially afterwards.
  std::vector<std::vector<double>> sq(static_cast<std::size_t>(paths));
  std::vector<char> diverged(static_cast<std::size_t>(paths), 0);

  parallel_for(paths, [&](int p) {
    const RngStream stream{seed, static_cast<std::uint64_t>(p)};
    try {
      Trajectory traj = simulate_path(system, h, stream);
      auto& dst = sq[static_cast<std::size_t>(p)];
      dst.reserve(traj.grid.values.size());
      for (const auto& x : traj.grid.values) dst.push_back(x.squaredNorm());
    } catch (const DivergenceError&) {
      diverged[static_cast<std::size_t>(p)] = 1;
    }
  });

  EnsembleStats stats;
  stats.h = h;
  stats.paths_requested = paths;
  for (char d : diverged) stats.divergent += d != 0 ? 1 : 0;
  stats.paths_used = paths - static_cast<int>(stats.divergent);
  if (stats.divergent * 100 > static_cast<std::uint64_t>(paths)) {
    throw DivergenceError(
        "ensemble aborted: " + std::to_string(stats.divergent) + " of " +
            std::to_string(paths) + " paths diverged (over 1%)",
        static_cast<int>(stats.divergent),
        static_cast<double>(stats.divergent) / paths);
  }
  if (stats.paths_used < 2) throw DomainError("fewer than 2 usable paths");

  std::size_t count = 0;
  for (int p = 0; p < paths; ++p) {
    if (!diverged[static_cast<std::size_t>(p)]) {
      count = sq[static_cast<std::size_t>(p)].size();
      break;
    }
  }
  stats.times.resize(count);
  stats.mean_sq.assign(count, 0.0);
  stats.ci_half_width.assign(count, 0.0);
  for (std::size_t k = 0; k < count; ++k) stats.times[k] = h * static_cast<double>(k);

  for (int p = 0; p < paths; ++p) {
    if (diverged[static_cast<std::size_t>(p)]) continue;
    const auto& src = sq[static_cast<std::size_t>(p)];
    for (std::size_t k = 0; k < count; ++k) stats.mean_sq[k] += src[k];
  }
  const double used = static_cast<double>(stats.paths_used);
  for (std::size_t k = 0; k < count; ++k) stats.mean_sq[k] /= used;

  for (int p = 0; p < paths; ++p) {
    if (diverged[static_cast<std::size_t>(p)]) continue;
    const auto& src = sq[static_cast<std::size_t>(p)];
    for (std::size_t k = 0; k < count; ++k) {
      const double d = src[k] - stats.mean_sq[k];
      stats.ci_half_width[k] += d * d;
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double var = stats.ci_half_width[k] / (used - 1.0);
    stats.ci_half_width[k] = kNormal975 * std::sqrt(var / used);
  }
  return stats;
}

DecayFit fit_decay(const EnsembleStats& stats, double window_fraction) {
  if (!(window_fraction > 0.0) || !(window_fraction <= 1.0)) {
    throw DomainError("window_fraction must lie in (0, 1]");
  }
  if (stats.times.size() != stats.mean_sq.size() || stats.times.empty()) {
    throw DomainError("ensemble statistics are empty or inconsistent");
  }
  const double horizon = stats.times.back();
  const double start = horizon * (1.0 - window_fraction);

  std::vector<double> ts, ys;
  std::size_t first = stats.times.size();
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    if (stats.times[k] + 1e-12 < start) continue;
    if (!(stats.mean_sq[k] > 0.0)) continue;
    if (first == stats.times.size()) first = k;
    ts.push_back(stats.times[k]);
    ys.push_back(std::log(stats.mean_sq[k]));
  }
  if (ts.size() < 10) {
    throw DomainError("decay fit needs at least 10 positive samples in the window");
  }

  const double n = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double dt = ts[i] - tbar, dy = ys[i] - ybar;
    sxx += dt * dt;
    sxy += dt * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("decay fit window has no time spread");

  const double slope = sxy / sxx;
  const double intercept = ybar - slope * tbar;
  double sse = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double resid = ys[i] - (intercept + slope * ts[i]);
    sse += resid * resid;
  }

  DecayFit fit;
  fit.mu_hat = -slope;
  fit.mu_se = ts.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  fit.m_star_hat = std::exp(intercept);
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.first_index = first;
  fit.points = static_cast<int>(ts.size());
  return fit;
}

IsometryReport isometry_report(int paths, std::uint64_t seed,
                               const std::string& case_name) {
  if (paths < 2) throw DomainError("isometry check needs at least 2 repetitions");

  const bool wiener_case =
      case_name == "wiener_isometry" || case_name == "wiener_p4_bound";
  const bool jump_case =
      case_name == "jump_isometry" || case_name == "jump_martingale";
  if (!wiener_case && !jump_case) {
    throw DomainError("unknown isometry case '" + case_name +
                      "'; valid: wiener_isometry, wiener_p4_bound, jump_isometry, "
                      "jump_martingale");
  }

  constexpr double kHorizon = 1.0;
  constexpr double kStep = 0.01;
  constexpr int kSteps = 100;
  constexpr double kIntensity = 2.0;

  // Left-point Ito sum of sigma(t) = t against one Wiener component: its
  // variance is exactly h^3 sum k^2 over k = 0..kSteps-1.
  double discrete_var = 0.0;
  for (int k = 0; k < kSteps; ++k) {
    discrete_var += (k * kStep) * (k * kStep) * kStep;
  }

  std::vector<double> samples(static_cast<std::size_t>(paths), 0.0);
  parallel_for(paths, [&](int p) {
    const RngStream stream{seed, static_cast<std::uint64_t>(p)};
    double value = 0.0;
    if (wiener_case) {
      Eigen::MatrixXd dW = wiener_increments(1, kSteps, kStep, stream);
      double ito = 0.0;
      for (int k = 0; k < kSteps; ++k) ito += (k * kStep) * dW(k, 0);
      value = case_name == "wiener_isometry" ? ito * ito : ito * ito * ito * ito;
    } else {
      JumpMeasure measure;
      measure.intensity = kIntensity;
      measure.marks.kind = MarkFamily::Kind::uniform;
      measure.marks.lower = 0.5;
      measure.marks.upper = 1.5;
      double total = 0.0;
      for (const JumpRecord& event : sample_jumps(measure, kHorizon, stream)) {
        total += event.mark;
      }
      const double mean_mark = 1.0;
      const double compensated = total - kIntensity * kHorizon * mean_mark;
      value = case_name == "jump_isometry" ? compensated * compensated : compensated;
    }
    samples[static_cast<std::size_t>(p)] = value;
  });

  IsometryReport report;
  report.case_name = case_name;
  if (case_name == "wiener_isometry") {
    report.expected = discrete_var;
  } else if (case_name == "wiener_p4_bound") {
    report.expected = 3.0 * discrete_var * discrete_var;
    report.one_sided = true;
  } else if (case_name == "jump_isometry") {
    // E (sum eta - lambda T E eta)^2 = lambda T E eta^2, uniform(0.5, 1.5)
    report.expected = kIntensity * kHorizon * (1.0 + 1.0 / 12.0);
  } else {
    report.expected = 0.0;
  }

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(paths);
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= static_cast<double>(paths - 1);

  report.estimate = mean;
  report.se = std::sqrt(var / static_cast<double>(paths));
  report.z = report.se > 0.0 ? (report.estimate - report.expected) / report.se : 0.0;
  return report;
}

}  // namespace fracstab
