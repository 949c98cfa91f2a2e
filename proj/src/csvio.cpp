#include "fracstab/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "fracstab/errors.hpp"

namespace fracstab {
namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw Error("failed writing output file '" + path + "'");
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  for (int i = 1; i <= traj.grid.dimension(); ++i) {
    out += ",x" + std::to_string(i);
  }
  out += "\n";
  for (std::size_t k = 0; k < traj.grid.values.size(); ++k) {
    out += fmt(traj.grid.time_at(k));
    const Eigen::VectorXd& x = traj.grid.values[k];
    for (Eigen::Index i = 0; i < x.size(); ++i) out += "," + fmt(x(i));
    out += "\n";
  }
  for (const JumpRecord& event : traj.jumps) {
    out += "# jump," + fmt(event.time) + "," + fmt(event.mark) + "\n";
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  write_file(path, trajectory_csv(traj));
}

std::string ensemble_csv(const EnsembleStats& stats, const DecayFit* fit) {
  std::string out = "t,mean_sq,ci_half_width\n";
  for (std::size_t k = 0; k < stats.times.size(); ++k) {
    out += fmt(stats.times[k]) + "," + fmt(stats.mean_sq[k]) + "," +
           fmt(stats.ci_half_width[k]) + "\n";
  }
  out += "# paths_used," + std::to_string(stats.paths_used) + "\n";
  out += "# divergent," + std::to_string(stats.divergent) + "\n";
  if (fit != nullptr) {
    out += "# mu_hat," + fmt(fit->mu_hat) + "\n";
    out += "# mu_se," + fmt(fit->mu_se) + "\n";
    out += "# m_star_hat," + fmt(fit->m_star_hat) + "\n";
    out += "# r_squared," + fmt(fit->r_squared) + "\n";
  }
  return out;
}

void write_ensemble_csv(const EnsembleStats& stats, const DecayFit* fit,
                        const std::string& path) {
  write_file(path, ensemble_csv(stats, fit));
}

}  // namespace fracstab
