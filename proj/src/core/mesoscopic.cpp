// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/mesoscopic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "core/error.hpp"

namespace cavitas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Truncated, renormalized Poisson weights |c_k|².
std::vector<double> poisson_weights(double nbar, const FockCutoff& cutoff) {
  cutoff.require_mean(nbar);
  const Eigen::VectorXcd c = coherent_field_state(std::sqrt(nbar), cutoff);
  std::vector<double> w(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) w[k] = std::norm(c[k]);
  return w;
}

}  // namespace

double MesoParams::default_c(const SpinQuantum& spin) {
  return spin.atoms() == 1 ? 1.0 : 0.5 * (spin.atoms() + 1);
}

MesoParams MesoParams::make(SpinQuantum spin, double nbar, double g, std::optional<double> c) {
  MesoParams p{spin, nbar, g, c.value_or(default_c(spin))};
  p.validate();
  return p;
}

void MesoParams::validate() const {
  require(nbar > 0 && std::isfinite(nbar), ErrorKind::InvalidConfig,
          "nbar must be positive and finite");
  require(g > 0 && std::isfinite(g), ErrorKind::InvalidConfig, "g must be positive and finite");
  require(c >= 0 && c <= spin.atoms() + 1, ErrorKind::InvalidConfig,
          "offset c must lie in [0, N+1]");
}

double MesoParams::phi(double t) const { return g * t / (2.0 * std::sqrt(nbar)); }

Eigen::VectorXcd gb_field_state(Projection m, double t, const MesoParams& params,
                                const FockCutoff& cutoff) {
  require(t >= 0, ErrorKind::Precondition, "time must be non-negative");
  params.spin.index(m);
  cutoff.require_mean(params.nbar);
  Eigen::VectorXcd v = coherent_field_state(std::sqrt(params.nbar), cutoff);
  const double mgt = m.value() * params.g * t;
  const double root = std::sqrt(params.nbar);
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v[k] *= std::polar(1.0, mgt * (root - std::sqrt(double(k))));
  v.normalize();
  return v;
}

Eigen::VectorXcd atomic_polarization(Projection m, double t, const MesoParams& params,
                                     const RotationMatrix& rot) {
  require(t >= 0, ErrorKind::Precondition, "time must be non-negative");
  const SpinQuantum& spin = params.spin;
  require(rot.spin() == spin, ErrorKind::InvalidConfig, "rotation matrix for another spin");
  const double phi = params.phi(t);
  Eigen::VectorXcd v(spin.dimension());
  for (int i = 0; i < spin.dimension(); ++i) {
    const Projection mp = spin.projection(i);
    const double phase = -m.value() * phi * (params.c - spin.j() + mp.value());
    v[i] = std::polar(rot(mp, m), phase);
  }
  return v;
}

JointState mesoscopic_state(Projection m0, double t, const MesoParams& params,
                            const FockCutoff& cutoff, const RotationMatrix& rot) {
  const SpinQuantum& spin = params.spin;
  JointState out(spin, cutoff);
  const double gtr = params.g * t * std::sqrt(params.nbar);
  for (const Projection m : spin.projections()) {
    const cplx w = rot(m0, m) * std::polar(1.0, -m.value() * gtr);
    const JointState pair = product_state(spin, cutoff, atomic_polarization(m, t, params, rot),
                                          gb_field_state(m, t, params, cutoff));
    out.amplitudes() += w * pair.amplitudes();
  }
  return out;
}

cplx overlap_factor(Projection m_plus, Projection m_minus, double t, const MesoParams& params,
                    const FockCutoff& cutoff) {
  const Eigen::VectorXcd a = gb_field_state(m_plus, t, params, cutoff);
  if (m_plus == m_minus) return 1.0;
  const Eigen::VectorXcd b = gb_field_state(m_minus, t, params, cutoff);
  return b.dot(a);
}

OverlapTable::OverlapTable(double nbar, double g, const FockCutoff& cutoff)
    : g_(g), weight_(poisson_weights(nbar, cutoff)), shift_(weight_.size()) {
  const double root = std::sqrt(nbar);
  for (std::size_t k = 0; k < shift_.size(); ++k) shift_[k] = std::sqrt(double(k)) - root;
}

cplx OverlapTable::operator()(int q, double t) const {
  if (q == 0) return 1.0;
  cplx acc = 0;
  for (std::size_t k = 0; k < weight_.size(); ++k)
    acc += weight_[k] * std::polar(1.0, -q * g_ * t * shift_[k]);
  return acc;
}

std::vector<cplx> OverlapTable::row(int qmax, double t) const {
  std::vector<cplx> out(std::max(qmax, 0), 0.0);
  for (std::size_t k = 0; k < weight_.size(); ++k) {
    const cplx z = std::polar(1.0, -g_ * t * shift_[k]);
    cplx zq = z;
    for (int q = 1; q <= qmax; ++q) {
      out[q - 1] += weight_[k] * zq;
      zq *= z;
    }
  }
  return out;
}

SignalCoefficients::SignalCoefficients(int n_atoms, std::vector<cplx> a)
    : n_(n_atoms), a_(std::move(a)) {
  require(int(a_.size()) == 2 * n_ + 1, ErrorKind::InvalidConfig,
          "signal coefficients need 2N+1 entries");
}

cplx SignalCoefficients::operator[](int q) const {
  if (q < -n_ || q > n_) fail(ErrorKind::Range, "separation q=" + std::to_string(q) + " out of range");
  return a_[q + n_];
}

SignalCoefficients signal_coefficients(Projection m0, Projection m, const RotationMatrix& rot) {
  const SpinQuantum& spin = rot.spin();
  spin.index(m0);
  spin.index(m);
  const int n = spin.atoms();
  std::vector<cplx> a(2 * n + 1, 0.0);
  for (int ip = 0; ip <= n; ++ip) {
    const Projection mp = spin.projection(ip);
    for (int im = 0; im <= n; ++im) {
      const Projection mm = spin.projection(im);
      a[ip - im + n] += rot(m0, mp) * rot(m0, mm) * rot(m, mp) * rot(m, mm);
    }
  }
  return SignalCoefficients(n, std::move(a));
}

double mesoscopic_rabi(Projection m0, Projection m, double t, const MesoParams& params,
                       const FockCutoff& cutoff, std::span<const cplx> functional) {
  params.validate();
  const int n = params.spin.atoms();
  require(functional.empty() || int(functional.size()) == n, ErrorKind::InvalidConfig,
          "decoherence functional needs one value per separation 1..N");
  const RotationMatrix rot = rotation_matrix(params.spin);
  const SignalCoefficients a = signal_coefficients(m0, m, rot);
  const OverlapTable table(params.nbar, params.g, cutoff);
  const std::vector<cplx> r = table.row(n, t);
  const double phi = params.phi(t);
  const double slow = params.c - params.spin.j() + m.value();
  const double fast = params.g * t * std::sqrt(params.nbar);
  double p = a.baseline().real();
  for (int q = 1; q <= n; ++q) {
    // the −q term is the complex conjugate of the +q term
    cplx term = a[q] * r[q - 1] * std::polar(1.0, -q * (slow * phi + fast));
    if (!functional.empty()) term *= std::conj(functional[q - 1]);
    p += 2.0 * term.real();
  }
  return p;
}

std::vector<RevivalEntry> revival_schedule(const SpinQuantum& spin) {
  const int n = spin.atoms();
  std::vector<RevivalEntry> out;
  for (int d = 1; d <= n; ++d) {
    std::vector<int> e;
    for (int q = d; q <= n; q += d) e.push_back(q);
    for (int j = 1; j <= d; ++j) {
      if (std::gcd(j, d) != 1) continue;
      out.push_back(RevivalEntry{kTwoPi * j / d, d, e, n + 1 - d, j > 1});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const RevivalEntry& a, const RevivalEntry& b) { return a.phi < b.phi; });
  return out;
}

EnvelopeModel::EnvelopeModel(const MesoParams& params, const FockCutoff& cutoff)
    : params_(params),
      a_(signal_coefficients(params.spin.top(), params.spin.top(),
                             rotation_matrix(params.spin))),
      overlap_(params.nbar, params.g, cutoff) {
  params.validate();
  for (const RevivalEntry& r : revival_schedule(params.spin))
    if (r.single_frequency()) windows_.emplace_back(r.phi, r.separations.front());
}

int EnvelopeModel::single_separation(double phi) const {
  const double half = std::numbers::pi / (2.0 * params_.spin.atoms());
  const double x = std::fmod(std::abs(phi), kTwoPi);
  for (const auto& [w, q] : windows_)
    if (std::abs(x - w) < half) return q;
  return 0;
}

EnvelopePair EnvelopeModel::at(double t, std::span<const double> damping,
                               std::optional<double> overlap_time) const {
  const int n = params_.spin.atoms();
  require(damping.empty() || int(damping.size()) == n, ErrorKind::InvalidConfig,
          "damping needs one value per separation 1..N");
  const double tau = overlap_time.value_or(t);
  const std::vector<cplx> r = overlap_.row(n, std::abs(tau));
  const int q_r = single_separation(params_.phi(std::abs(tau)));
  const double a0 = a_.baseline().real();
  auto term = [&](int q) {
    const double t_q = 2.0 * std::abs(r[q - 1] * a_[q]);
    return damping.empty() ? t_q : t_q * damping[q - 1];
  };
  if (q_r != 0) return EnvelopePair{a0 + term(q_r), a0 - term(q_r), true};
  double up = a0, lo = a0;
  for (int q = 1; q <= n; ++q) {
    up += term(q);
    lo += q % 2 != 0 ? -term(q) : term(q);
  }
  return EnvelopePair{up, lo, false};
}

EnvelopePair envelopes(double t, const MesoParams& params, const FockCutoff& cutoff,
                       std::span<const double> damping) {
  return EnvelopeModel(params, cutoff).at(t, damping);
}

}  // namespace cavitas
