// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dissipation.hpp
 * @brief Cavity damping at temperature n_th: analytic decoherence functionals.
 *
 * The master equation and the quantum-jump engine live in master.hpp and
 * montecarlo.hpp.
 */

#pragma once

#include <optional>
#include <vector>

#include "core/mesoscopic.hpp"

namespace cavitas {

struct BathParams {
  double gamma = 0;
  double n_th = 0;

  /// κ_T = 1 + 2 n_th.
  double kappa_t() const { return 1.0 + 2.0 * n_th; }
  double emit_rate() const { return gamma * (1.0 + n_th); }
  double absorb_rate() const { return gamma * n_th; }
  void validate() const;
};

struct DecoherenceEval {
  int q = 0;
  double d = 0;
  double theta = 0;

  cplx value() const { return std::exp(cplx(-d, theta)); }
};

/// Pair functional without echo; γ is replaced by γ κ_T.
DecoherenceEval decoherence_free(int q, double t, const MesoParams& params, const BathParams& bath);

/// Pair functional after an echo at t_pi; requires t ≥ t_pi.
DecoherenceEval decoherence_echo(int q, double t_pi, double t, const MesoParams& params,
                                 const BathParams& bath);

/// Overlap factors after an echo are evaluated at 2 t_π − t.
inline double echo_overlap_time(double t_pi, double t) { return 2.0 * t_pi - t; }

/// exp(n̄(e^{iθ}−1)(1−e^{−γt})).
cplx cat_decoherence(double theta, double t, double nbar, double gamma);

/// Envelopes with each separation damped by e^{−d_q}; the echo variant reflects overlaps.
class DissipativeEnvelopes {
 public:
  DissipativeEnvelopes(const MesoParams& params, const FockCutoff& cutoff, const BathParams& bath,
                       std::optional<double> t_pi = std::nullopt);

  EnvelopePair at(double t) const;
  std::vector<double> damping(double t) const;
  const EnvelopeModel& model() const { return model_; }

 private:
  MesoParams params_;
  BathParams bath_;
  std::optional<double> t_pi_;
  EnvelopeModel model_;
};

EnvelopePair dissipative_envelopes(double t, const MesoParams& params, const FockCutoff& cutoff,
                                   const BathParams& bath,
                                   std::optional<double> t_pi = std::nullopt);

}  // namespace cavitas
