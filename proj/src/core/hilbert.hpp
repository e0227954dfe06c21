// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Truncated Dicke⊗Fock states.
 *
 * Flat layout: amplitude of |J,m⟩⊗|n⟩ sits at index(m)·(nmax+1) + n.
 */

#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "core/su2.hpp"

namespace cavitas {

class FockCutoff {
 public:
  explicit FockCutoff(int nmax);

  /// ceil(n̄ + 8√n̄ + 10).
  static FockCutoff for_mean(double nbar);

  int nmax() const { return nmax_; }
  int levels() const { return nmax_ + 1; }
  /// Throws a truncation error unless n̄ + 8√n̄ ≤ nmax.
  void require_mean(double nbar) const;

  bool operator==(const FockCutoff&) const = default;

 private:
  int nmax_;
};

class JointState {
 public:
  JointState(SpinQuantum spin, FockCutoff cutoff);
  JointState(SpinQuantum spin, FockCutoff cutoff, Eigen::VectorXcd amplitudes);

  const SpinQuantum& spin() const { return spin_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  Eigen::Index size() const { return psi_.size(); }

  Eigen::Index flat(int dicke_index, int n) const;
  std::pair<int, int> unflat(Eigen::Index k) const;

  cplx& at(Projection m, int n) { return psi_[flat(spin_.index(m), n)]; }
  cplx at(Projection m, int n) const { return psi_[flat(spin_.index(m), n)]; }

  Eigen::VectorXcd& amplitudes() { return psi_; }
  const Eigen::VectorXcd& amplitudes() const { return psi_; }

  double norm_squared() const { return psi_.squaredNorm(); }
  void normalize();

  /// ⟨J^z + a†a⟩ for a normalized state.
  double excitation() const;
  double mean_photons() const;
  /// Probability carried by the top `levels` Fock states.
  double top_leakage(int levels = 5) const;

  bool same_space(const JointState& other) const {
    return spin_ == other.spin_ && cutoff_ == other.cutoff_;
  }

 private:
  SpinQuantum spin_;
  FockCutoff cutoff_;
  Eigen::VectorXcd psi_;
};

/**
 * Probability in the top `levels` Fock states restricted to basis states that
 * can still be pushed past the cutoff: n + (excited atoms) > nmax, or any state
 * when the bath can add photons.
 */
double truncation_leakage(const JointState& state, bool absorbing, int levels = 5);

/// Truncated Poisson amplitudes α^k/√k!, renormalized.
Eigen::VectorXcd coherent_field_state(cplx alpha, const FockCutoff& cutoff);

Eigen::VectorXcd fock_state(int n, const FockCutoff& cutoff);
Eigen::VectorXcd dicke_state(const SpinQuantum& spin, Projection m);
/// exp(−iπJʸ/2)|J,m⟩, an eigenstate of Jˣ.
Eigen::VectorXcd x_basis_state(const RotationMatrix& rot, Projection m);

JointState product_state(const SpinQuantum& spin, const FockCutoff& cutoff,
                         const Eigen::VectorXcd& atomic, const Eigen::VectorXcd& field);

double excited_population(const JointState& state, Projection m);
/// Populations ordered by Dicke index.
std::vector<double> populations(const JointState& state);

/**
 * Husimi-style phase cut of the reduced field state. Bin b covers
 * [−π + 2πb/bins, −π + 2π(b+1)/bins) and is sampled at its center with a
 * coherent probe of amplitude √⟨n⟩.
 */
std::vector<double> field_phase_distribution(const JointState& state, int bins);

/// The stable subspace H_p: |J,J−l⟩⊗|p+l⟩ for l = 0..2J, p ≥ −2J.
class SubspaceIndex {
 public:
  SubspaceIndex(const SpinQuantum& spin, int p);

  int p() const { return p_; }
  /// Number of basis states before truncation: min(2J, p+2J)+1.
  int dimension() const;
  /// (Dicke index, photon number) pairs surviving the cutoff.
  std::vector<std::pair<int, int>> members(const FockCutoff& cutoff) const;
  static int label_of(const SpinQuantum& spin, int dicke_index, int n);

 private:
  SpinQuantum spin_;
  int p_;
};

/// Amplitude blocks keyed by p.
std::map<int, Eigen::VectorXcd> decompose(const JointState& state);
JointState recompose(const SpinQuantum& spin, const FockCutoff& cutoff,
                     const std::map<int, Eigen::VectorXcd>& blocks);

/// CSV with columns m,n,re,im.
void write_state_csv(const JointState& state, std::ostream& out);

}  // namespace cavitas
