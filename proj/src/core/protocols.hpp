// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file protocols.hpp
 * @brief End-to-end experiments: spontaneous and echo revivals, thermal
 * preparation, analytic envelopes, and the validation report.
 *
 * Times are in μs with g = 2π·g_khz·1e-3 rad/μs. Grids are given in φ.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/montecarlo.hpp"
#include "core/series.hpp"

namespace cavitas {

/// φ_m = 2π·2.5/√n̄, the last φ reachable within the atomic flight time.
double flight_limit_phi(double nbar);

/// φ_max·k/phi_steps for k = 0..phi_steps.
std::vector<double> phi_grid(const ExperimentConfig& cfg);

/// Resolved numerical setup shared by the protocols.
struct Setup {
  SpinQuantum spin;
  FockCutoff cutoff;
  MesoParams meso;
  BathParams bath;
  double g;
};

Setup make_setup(const ExperimentConfig& cfg, double field_mean);

RabiSeries run_spontaneous(const ExperimentConfig& cfg);
RabiSeries run_spontaneous(const ExperimentConfig& cfg, const std::vector<double>& phis);
RabiSeries run_echo(const ExperimentConfig& cfg);
RabiSeries run_echo(const ExperimentConfig& cfg, const std::vector<double>& phis);
RabiSeries run_thermalized(const ExperimentConfig& cfg);
RabiSeries run_thermalized(const ExperimentConfig& cfg, const std::vector<double>& phis);
/// Lossless and dissipative envelopes only; P holds the mesoscopic signal.
RabiSeries run_envelopes(const ExperimentConfig& cfg);

/// Dispatches on cfg.mode for the series-producing modes.
RabiSeries run_experiment(const ExperimentConfig& cfg);

/// Peak-to-peak swing of P over rows with φ in [lo, hi].
double window_contrast(const RabiSeries& series, double lo, double hi);
/// P_upper at the window's maximum of P minus P_lower at its minimum.
double envelope_contrast(const RabiSeries& series, double lo, double hi);

struct ValidationCheck {
  std::string name;
  bool passed;
  std::string measured;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

ValidationReport validate(const ExperimentConfig& cfg);

}  // namespace cavitas
