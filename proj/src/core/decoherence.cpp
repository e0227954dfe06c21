// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/dissipation.hpp"

#include <cmath>

#include "core/error.hpp"

namespace cavitas {

void BathParams::validate() const {
  require(gamma >= 0 && std::isfinite(gamma), ErrorKind::InvalidConfig,
          "gamma must be finite and non-negative");
  require(n_th >= 0 && std::isfinite(n_th), ErrorKind::InvalidConfig,
          "n_th must be finite and non-negative");
}

namespace {

double strength(const MesoParams& params, const BathParams& bath) {
  return 2.0 * bath.gamma * bath.kappa_t() * std::pow(params.nbar, 1.5) / params.g;
}

/// (x − sin x)/q with x = qφ, kept accurate for small x.
double lag(int q, double phi) {
  const double x = q * phi;
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x * x2 * (1.0 / 6.0 - x2 * (1.0 / 120.0 - x2 / 5040.0)) / q;
  }
  return (x - std::sin(x)) / q;
}

double sin2_half(double x) {
  const double s = std::sin(0.5 * x);
  return s * s;
}

}  // namespace

DecoherenceEval decoherence_free(int q, double t, const MesoParams& params,
                                 const BathParams& bath) {
  bath.validate();
  require(t >= 0, ErrorKind::Precondition, "time must be non-negative");
  DecoherenceEval e{q, 0, 0};
  if (q == 0 || bath.gamma == 0) return e;
  const double phi = params.phi(t);
  const double s = strength(params, bath);
  e.d = s * lag(q, phi);
  e.theta = 2.0 * s * sin2_half(q * phi) / q;
  return e;
}

DecoherenceEval decoherence_echo(int q, double t_pi, double t, const MesoParams& params,
                                 const BathParams& bath) {
  bath.validate();
  require(t_pi >= 0, ErrorKind::Precondition, "echo time must be non-negative");
  require(t >= t_pi, ErrorKind::Precondition,
          "echo functional needs t >= t_pi; use decoherence_free before the pulse");
  DecoherenceEval e{q, 0, 0};
  if (q == 0 || bath.gamma == 0) return e;
  const double phi = params.phi(t);
  const double phi_pi = params.phi(t_pi);
  const double back = 2.0 * phi_pi - phi;
  const double s = strength(params, bath);
  e.d = s * (phi - (2.0 * std::sin(q * phi_pi) - std::sin(q * back)) / q);
  e.theta = 2.0 * s * (2.0 * sin2_half(q * phi_pi) - sin2_half(q * back)) / q;
  return e;
}

cplx cat_decoherence(double theta, double t, double nbar, double gamma) {
  require(t >= 0, ErrorKind::Precondition, "time must be non-negative");
  const double lost = -std::expm1(-gamma * t);
  return std::exp(nbar * lost * (std::polar(1.0, theta) - 1.0));
}

DissipativeEnvelopes::DissipativeEnvelopes(const MesoParams& params, const FockCutoff& cutoff,
                                           const BathParams& bath, std::optional<double> t_pi)
    : params_(params), bath_(bath), t_pi_(t_pi), model_(params, cutoff) {
  bath.validate();
}

std::vector<double> DissipativeEnvelopes::damping(double t) const {
  const int n = params_.spin.atoms();
  std::vector<double> out(n);
  const bool echoed = t_pi_ && t >= *t_pi_;
  for (int q = 1; q <= n; ++q) {
    const DecoherenceEval e = echoed ? decoherence_echo(q, *t_pi_, t, params_, bath_)
                                     : decoherence_free(q, t, params_, bath_);
    out[q - 1] = std::exp(-e.d);
  }
  return out;
}

EnvelopePair DissipativeEnvelopes::at(double t) const {
  const std::vector<double> d = damping(t);
  if (t_pi_ && t >= *t_pi_) return model_.at(t, d, echo_overlap_time(*t_pi_, t));
  return model_.at(t, d);
}

EnvelopePair dissipative_envelopes(double t, const MesoParams& params, const FockCutoff& cutoff,
                                   const BathParams& bath, std::optional<double> t_pi) {
  return DissipativeEnvelopes(params, cutoff, bath, t_pi).at(t);
}

}  // namespace cavitas
