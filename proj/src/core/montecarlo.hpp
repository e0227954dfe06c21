// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file montecarlo.hpp
 * @brief Quantum-jump unravelling of the damped Tavis-Cummings dynamics.
 *
 * Channels: emission √(γ(1+n_th)) a and absorption √(γ n_th) a†. Jump times
 * follow the waiting-time rule: propagate under H_eff until ‖ψ‖² falls to a
 * uniform threshold. Each trajectory owns an mt19937_64 stream seeded from
 * (master seed, trajectory index).
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/dissipation.hpp"
#include "core/generator.hpp"
#include "core/hilbert.hpp"

namespace cavitas {

enum class JumpChannel { Emit, Absorb };

const char* to_string(JumpChannel channel) noexcept;

struct JumpEvent {
  double time;
  JumpChannel channel;
};

class JumpRecord {
 public:
  /// Times must be strictly increasing.
  void push(double time, JumpChannel channel);
  const std::vector<JumpEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  long count(JumpChannel channel) const;

 private:
  std::vector<JumpEvent> events_;
};

struct CavityModel {
  SpinQuantum spin;
  FockCutoff cutoff;
  double g;
  BathParams bath;
};

/// What one trajectory does; shared verbatim by every member of an ensemble.
struct TrajectoryPlan {
  CavityModel model;
  /// Sample times counted from the moment the coupling is switched on.
  std::vector<double> times;
  std::optional<double> echo_time;
  /// Field-only evolution with the coupling off before t = 0.
  double prep_duration = 0;
  /// Maximum step; 0 picks courant / fastest rate.
  double dt = 0;
  double courant = kDefaultCourant;

  void validate() const;
};

struct SampleView {
  std::size_t index;
  /// Time since coupling started.
  double time;
  /// Absolute time of coupling start in the jump record.
  double coupling_start;
  const Eigen::VectorXcd& psi;
  const SpinQuantum& spin;
  const FockCutoff& cutoff;
  const JumpRecord& jumps;
};

struct Observable {
  std::string name;
  int channels;
  std::function<void(const SampleView&, double*)> eval;
};

Observable top_population_observable();
Observable populations_observable(const SpinQuantum& spin);
Observable photon_number_observable();
/// Emission and absorption counts so far.
Observable jump_count_observable();
/// Re, Im of e^{iθ N_emit}.
Observable jump_phase_observable(double theta);
/// Re, Im of exp(iΣ_l qφ_l) over emissions during coupling, φ reflected after an echo.
Observable pair_phase_observable(int q, double g, double nbar,
                                 std::optional<double> echo_time = std::nullopt);

struct TrajectoryResult {
  Eigen::VectorXcd final_state;
  JumpRecord jumps;
  /// times × channels, row major.
  std::vector<double> samples;
  double max_norm_drift = 0;
  double max_leakage = 0;
};

TrajectoryResult mc_trajectory(const JointState& initial, const TrajectoryPlan& plan,
                               const Observable& obs, std::uint64_t seed);

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

struct EnsembleStats {
  std::size_t samples = 0;
  int channels = 0;
  long trajectories = 0;
  std::vector<double> mean;
  std::vector<double> stderr_;

  double mean_at(std::size_t k, int c = 0) const { return mean[k * channels + c]; }
  double stderr_at(std::size_t k, int c = 0) const { return stderr_[k * channels + c]; }
};

/// Running first and second moments in a fixed summation order.
class EnsembleAccumulator {
 public:
  EnsembleAccumulator(std::size_t samples, int channels);

  void add(const std::vector<double>& values);
  void merge(const EnsembleAccumulator& other);
  long count() const { return count_; }
  /// Requires at least two trajectories.
  EnsembleStats finish() const;

 private:
  std::size_t samples_;
  int channels_;
  long count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum2_;
};

struct EnsembleOptions {
  long trajectories = 0;
  std::uint64_t seed = 1;
  /// 0 uses the hardware concurrency.
  int threads = 0;
  bool keep_jumps = false;
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<JumpRecord> jumps;
  double max_norm_drift = 0;
  double max_leakage = 0;
};

/// Results do not depend on the thread count.
EnsembleResult mc_average(const JointState& initial, const TrajectoryPlan& plan,
                          const Observable& obs, const EnsembleOptions& options);

}  // namespace cavitas
