// CSV writers with fixed %.15g formatting so identical runs produce
// byte-identical files.
#pragma once

#include <string>

#include "fracstab/solver.hpp"
#include "fracstab/stats.hpp"

namespace fracstab {

// Header "t,x1,...,xn", one row per grid point, then one "# jump,time,mark"
// comment line per realized jump event.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
std::string trajectory_csv(const Trajectory& traj);

// Header "t,mean_sq,ci_half_width", one row per grid point, then fit
// summary comment lines when a fit is supplied.
void write_ensemble_csv(const EnsembleStats& stats, const DecayFit* fit,
                        const std::string& path);
std::string ensemble_csv(const EnsembleStats& stats, const DecayFit* fit);

}  // namespace fracstab
