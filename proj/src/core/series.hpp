// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cavitas {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RabiSample {
  double phi = 0;
  double t = 0;
  double p = 0;
  double p_stderr = 0;
  double p_upper = kNaN;
  double p_lower = kNaN;
  bool beyond_flight_limit = false;
};

/// Sampled excited-state population with optional envelopes and error bars.
struct RabiSeries {
  std::vector<RabiSample> rows;
  double flight_limit_phi = std::numeric_limits<double>::infinity();
  std::optional<double> echo_phi;
  double max_norm_drift = 0;
  double max_leakage = 0;
  long trajectories = 0;
  std::vector<std::string> warnings;
};

}  // namespace cavitas
