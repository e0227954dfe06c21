// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Experiment configuration: flat key=value files with layered overrides.
 *
 * Precedence, lowest first: built-in defaults, config file, CAVITAS_SEED,
 * explicit overrides.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/dissipation.hpp"

namespace cavitas {

enum class Mode { Spontaneous, Echo, Thermal, Envelopes, Validate, Schedule };

const char* to_string(Mode mode) noexcept;
Mode parse_mode(const std::string& text);

struct ExperimentConfig {
  Mode mode = Mode::Spontaneous;
  int n_atoms = 1;
  double nbar = 15;
  /// Infinity means a lossless cavity.
  double g_over_gamma = 1540;
  double g_khz = 49;
  double n_th = 0;
  std::optional<double> c;
  std::optional<int> cutoff;
  std::optional<double> t_pi_us;
  double gamma_tp = 0.47;
  std::optional<double> n0;
  long trajectories = 500;
  double phi_max = 6.283185307179586;
  int phi_steps = 2000;
  std::uint64_t seed = 1;
  std::string out;
  double courant = 0.015;
  int threads = 0;

  /// Vacuum Rabi coupling in rad/μs.
  double g() const;
  /// Energy decay rate in 1/μs, zero for an infinite g/γ.
  double gamma() const;
  BathParams bath() const;
  /// Echo time actually used, 30 μs unless set.
  double echo_time_us() const;
  /// Preparation time t_p = gamma_tp/γ in μs.
  double prep_time_us() const;
  /// n_th for the thermal protocol, derived from n0 when n_th is unset.
  double thermal_occupation() const;

  void validate() const;
  /// Resolved key=value pairs in a stable order.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

struct ConfigSources {
  std::optional<std::string> file;
  std::optional<std::string> env_seed;
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// Known keys in documentation order.
const std::vector<std::string>& config_keys();

/// Parses `key=value` lines; `#` starts a comment.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text,
                                                                  const std::string& origin);

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(const ConfigSources& sources);

}  // namespace cavitas
