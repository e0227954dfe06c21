// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file mesoscopic.hpp
 * @brief Gea-Banacloche decomposition of the Tavis-Cummings dynamics for n̄ ≫ N.
 *
 * Starting from |J,m0⟩⊗|α⟩ with α = √n̄, the state splits into N+1 pairs
 * |D_m(t)⟩⊗|ψ_m(t)⟩. The Rabi signal is a sum over pair separations q.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "core/hilbert.hpp"
#include "core/su2.hpp"

namespace cavitas {

struct MesoParams {
  SpinQuantum spin;
  double nbar;
  double g;
  double c;

  /// 1 for a single atom, (N+1)/2 otherwise.
  static double default_c(const SpinQuantum& spin);
  static MesoParams make(SpinQuantum spin, double nbar, double g,
                         std::optional<double> c = std::nullopt);

  void validate() const;
  /// True when n̄ < 5N, where the expansion in 1/√n̄ is doubtful.
  bool weakly_mesoscopic() const { return nbar < 5.0 * spin.atoms(); }
  double phi(double t) const;
};

/// |ψ_m(t)⟩: amplitude e^{imgt√n̄} c_k e^{−imgt√k} on |k⟩, renormalized.
Eigen::VectorXcd gb_field_state(Projection m, double t, const MesoParams& params,
                                const FockCutoff& cutoff);

/// |D_m(t)⟩: component e^{−igmt(c−J+m')/2√n̄} R_{m',m} on |J,m'⟩.
Eigen::VectorXcd atomic_polarization(Projection m, double t, const MesoParams& params,
                                     const RotationMatrix& rot);

/// Σ_m R_{m0,m} e^{−imgt√n̄} |D_m(t)⟩⊗|ψ_m(t)⟩.
JointState mesoscopic_state(Projection m0, double t, const MesoParams& params,
                            const FockCutoff& cutoff, const RotationMatrix& rot);

/// ⟨ψ_{m−}(t)|ψ_{m+}(t)⟩ by truncated Fock summation.
cplx overlap_factor(Projection m_plus, Projection m_minus, double t, const MesoParams& params,
                    const FockCutoff& cutoff);

/// R_q(t) = Σ_k P(k) e^{−iqgt(√k−√n̄)} for a truncated Poisson P.
class OverlapTable {
 public:
  OverlapTable(double nbar, double g, const FockCutoff& cutoff);

  cplx operator()(int q, double t) const;
  /// R_1..R_{qmax} at one time.
  std::vector<cplx> row(int qmax, double t) const;

 private:
  double g_;
  std::vector<double> weight_;
  std::vector<double> shift_;
};

class SignalCoefficients {
 public:
  SignalCoefficients(int n_atoms, std::vector<cplx> a);

  int max_q() const { return n_; }
  cplx operator[](int q) const;
  cplx baseline() const { return (*this)[0]; }

 private:
  int n_;
  std::vector<cplx> a_;  // index q + N
};

/// A_q = Σ_{m+ − m− = q} R_{m0,m+} R_{m0,m−} R_{m,m+} R_{m,m−}.
SignalCoefficients signal_coefficients(Projection m0, Projection m, const RotationMatrix& rot);

/**
 * P_m(t) = Σ_q A_q R_q(t) e^{−iq(c−J+m)φ} e^{−iqgt√n̄} F_{−q}.
 * functional holds F_1..F_N of the pair decoherence functional; empty means none.
 */
double mesoscopic_rabi(Projection m0, Projection m, double t, const MesoParams& params,
                       const FockCutoff& cutoff, std::span<const cplx> functional = {});

struct RevivalEntry {
  double phi;
  int gcd;
  std::vector<int> separations;
  int pair_count;
  bool replica;
  bool single_frequency() const { return separations.size() == 1; }
};

/// Revivals in (0, 2π], ordered by φ.
std::vector<RevivalEntry> revival_schedule(const SpinQuantum& spin);

struct EnvelopePair {
  double upper;
  double lower;
  /// True when the symmetric single-separation lower envelope was used.
  bool single_q;
};

/**
 * Upper and lower envelopes of P_J for m0 = J.
 *
 * Terms T_q = |R_q A_q| D_q run over q = ±1..±N. Inside |φ − φ_r| < π/(2N)
 * of a revival carried by the single separation q_r, P_± = A_0 ± T_{q_r}.
 * Elsewhere P_+ = A_0 + Σ T_q and P_− = A_0 + Σ (−1)^q T_q. φ is taken
 * modulo 2π.
 */
class EnvelopeModel {
 public:
  EnvelopeModel(const MesoParams& params, const FockCutoff& cutoff);

  const SignalCoefficients& coefficients() const { return a_; }
  /// damping holds D_1..D_N (empty means 1). overlap_time defaults to t.
  EnvelopePair at(double t, std::span<const double> damping = {},
                  std::optional<double> overlap_time = std::nullopt) const;
  bool in_single_window(double phi) const { return single_separation(phi) != 0; }
  /// q_r of the single-separation window containing φ, 0 outside all of them.
  int single_separation(double phi) const;

 private:
  MesoParams params_;
  SignalCoefficients a_;
  OverlapTable overlap_;
  std::vector<std::pair<double, int>> windows_;
};

EnvelopePair envelopes(double t, const MesoParams& params, const FockCutoff& cutoff,
                       std::span<const double> damping = {});

}  // namespace cavitas
