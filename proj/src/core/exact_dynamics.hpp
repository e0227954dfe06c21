// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file exact_dynamics.hpp
 * @brief Closed Tavis-Cummings evolution, H/ħ = (g/2)(J⁺a + J⁻a†).
 */

#pragma once

#include <optional>
#include <vector>

#include "core/generator.hpp"
#include "core/hilbert.hpp"
#include "core/series.hpp"

namespace cavitas {

struct TCParams {
  double g;
  SpinQuantum spin;
  FockCutoff cutoff;

  void validate() const;
};

struct IntegratorConfig {
  static constexpr int kHistory = 4;
  double dt = 0;

  /// dt = courant / (g √nmax (N+1)/2).
  static IntegratorConfig for_params(const TCParams& params, double courant = kDefaultCourant);
  void validate(const TCParams& params) const;
};

/// Runs abort when |1 − ‖ψ‖²| exceeds this between samples.
inline constexpr double kMaxNormDrift = 1e-6;
/// Largest probability tolerated in the top five Fock levels.
inline constexpr double kMaxLeakage = 1e-8;

JointState apply_hamiltonian(const JointState& state, const TCParams& params);

struct EvolveReport {
  double norm_drift = 0;
  double leakage = 0;
};

JointState evolve(const JointState& state, const TCParams& params,
                  const IntegratorConfig& integ, double t, EvolveReport* report = nullptr);

/// Multiplies amplitude(m, n) by (−1)^(J−m).
JointState apply_echo(JointState state);
void apply_echo(const SpinQuantum& spin, const FockCutoff& cutoff, Eigen::VectorXcd& psi);

/// P_{m=J} at each time; φ uses nbar. An echo fires at echo_time when given.
RabiSeries exact_rabi_series(const JointState& initial, const TCParams& params,
                             const IntegratorConfig& integ, const std::vector<double>& times,
                             double nbar, std::optional<double> echo_time = std::nullopt);

/// φ = g t / (2√n̄).
double phi_of_time(double t, double g, double nbar);
double time_of_phi(double phi, double g, double nbar);

}  // namespace cavitas
