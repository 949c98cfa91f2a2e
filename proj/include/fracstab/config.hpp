// Flat dotted-key run configuration: system block, numerics, optional
// hypothesis constants for certification, ensemble defaults, and the
// certificate evaluation mode.
#pragma once

#include <cstdint>
#include <string>

#include "fracstab/certify.hpp"
#include "fracstab/system.hpp"

namespace fracstab {

struct EnsembleParams {
  int paths = 100;
  std::uint64_t seed = 1;
  double window_fraction = 0.5;
};

struct RunConfig {
  FracSystem system;
  double h = 0.01;
  bool has_hypothesis = false;
  HypothesisConstants hypothesis;
  CertMode mode = CertMode::rectified;
  EnsembleParams ensemble;
};

// Parses `key = value` lines ('#' starts a comment). Unknown or duplicate
// keys and malformed values raise ConfigError with file:line positions.
RunConfig parse_config(const std::string& path);

// Canonical text form; parse_config(write of this) reproduces the config.
std::string serialize_config(const RunConfig& config);

}  // namespace fracstab
