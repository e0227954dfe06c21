// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file generator.hpp
 * @brief Shared propagation engine for closed and monitored cavity evolution.
 *
 * The wavefunction obeys dψ/dt = −i H_eff ψ with
 *   H_eff = (g/2)(J⁺a + J⁻a†) − (i/2)[κ₋ a†a + κ₊ a a†],
 * κ₋ = γ(1+n_th) and κ₊ = γ n_th. Closed evolution is κ± = 0. The truncated
 * a a† vanishes on the top Fock level, matching the truncated jump operator.
 */

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "core/hilbert.hpp"

namespace cavitas {

class CavityGenerator {
 public:
  CavityGenerator(const SpinQuantum& spin, const FockCutoff& cutoff, double g,
                  double emit_rate, double absorb_rate);

  const SpinQuantum& spin() const { return spin_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  Eigen::Index size() const { return Eigen::Index(spin_.dimension()) * cutoff_.levels(); }
  double g() const { return g_; }
  double emit_rate() const { return emit_; }
  double absorb_rate() const { return absorb_; }
  bool monitored() const { return emit_ > 0 || absorb_ > 0; }

  /// out = −i H_eff in.
  void derivative(const cplx* in, cplx* out) const;
  /// out = H in (coupling only).
  void hamiltonian(const cplx* in, cplx* out) const;

  /// ⟨L†L⟩ of the emission and absorption channels, unnormalized.
  double emission_weight(const Eigen::VectorXcd& psi) const;
  double absorption_weight(const Eigen::VectorXcd& psi) const;
  void emit(Eigen::VectorXcd& psi) const;
  void absorb(Eigen::VectorXcd& psi) const;

 private:
  SpinQuantum spin_;
  FockCutoff cutoff_;
  double g_, emit_, absorb_;
  std::vector<double> up_;    // coefficient of amp(i−1, n+1) in row (i, n)
  std::vector<double> down_;  // coefficient of amp(i+1, n−1)
  std::vector<double> damp_;  // ½[κ₋ n + κ₊ (n+1)] per n
};

/// Largest dt·g·√nmax and dt·κ·nmax accepted by the fixed-step scheme.
inline constexpr double kMaxCourant = 0.05;
/// Default dt·g·√nmax·(N+1)/2.
inline constexpr double kDefaultCourant = 0.015;

/// Step bound implied by the generator's fastest scale.
double max_stable_step(const CavityGenerator& gen, double courant);
/// Rejects dt above the Courant bound with an invalid-config error.
void check_step(const CavityGenerator& gen, double dt);

/**
 * Fixed-step Adams-Bashforth-4 with a classical Runge-Kutta-4 start.
 * The history is discarded whenever the step or the state changes discontinuously.
 */
class MultistepPropagator {
 public:
  explicit MultistepPropagator(const CavityGenerator& gen);

  void reset(double h);
  double step_size() const { return h_; }
  void step(Eigen::VectorXcd& y);
  /// Multiplies the stored derivatives, used when y is rescaled.
  void scale(double s);
  void rk4(const Eigen::VectorXcd& y0, double tau, Eigen::VectorXcd& out) const;

 private:
  const CavityGenerator* gen_;
  double h_ = 0;
  int filled_ = 0;
  std::vector<Eigen::VectorXcd> f_;  // f_[0] newest
  mutable Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_;
};

/// Callbacks for quantum-jump unravelling.
struct JumpHooks {
  /// Draws a fresh waiting-time threshold in (0, 1).
  std::function<double()> threshold;
  /// Applies a jump at absolute time t; must leave psi normalized.
  std::function<void(double t, Eigen::VectorXcd& psi)> jump;
};

/**
 * Piecewise propagation towards successive targets. Each interval is split
 * into equal steps no longer than dt_max; the multistep history survives
 * across intervals when the step size is unchanged.
 */
class Evolution {
 public:
  Evolution(const CavityGenerator& gen, Eigen::VectorXcd psi, double t0, double dt_max);

  double time() const { return t_; }
  const Eigen::VectorXcd& state() const { return psi_; }
  Eigen::VectorXcd& mutable_state() { return psi_; }

  void arm(const JumpHooks* hooks);
  /// Continues under a different generator on the same space; the jump clock carries over.
  void switch_generator(const CavityGenerator& gen, double dt_max);
  void advance_to(double t_target);
  /// Normalizes the state, returns |1 − ‖ψ‖²| before rescaling.
  double renormalize();
  /// Drops the multistep history after an external state change.
  void restart() { fresh_ = true; }

 private:
  void locate_and_jump(const Eigen::VectorXcd& y0, double t0, double h);

  const CavityGenerator* gen_;
  Eigen::VectorXcd psi_;
  double t_;
  double dt_max_;
  MultistepPropagator prop_;
  bool fresh_ = true;
  const JumpHooks* requested_ = nullptr;
  const JumpHooks* hooks_ = nullptr;
  double threshold_ = 0;
  Eigen::VectorXcd prev_;
};

}  // namespace cavitas

namespace cavitas {

/**
 * Walks an Evolution through increasing sample times, firing an instantaneous
 * echo at echo_time when given. on_sample sees the normalized state and the
 * drift removed by renormalization.
 */
void run_sampled(Evolution& evo, const std::vector<double>& times,
                 std::optional<double> echo_time,
                 const std::function<void(Eigen::VectorXcd&)>& echo,
                 const std::function<void(std::size_t, const Eigen::VectorXcd&, double)>& on_sample);

}  // namespace cavitas
