// Minimal self-contained SVG rendering of ensemble mean-square statistics
// with the confidence band and, optionally, the fitted decay envelope.
#pragma once

#include <string>

#include "fracstab/stats.hpp"

namespace fracstab {

void write_svg(const EnsembleStats& stats, const DecayFit* fit,
               const std::string& path);

}  // namespace fracstab
