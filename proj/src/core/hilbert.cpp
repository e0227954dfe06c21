// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "core/error.hpp"

namespace cavitas {

FockCutoff::FockCutoff(int nmax) : nmax_(nmax) {
  require(nmax >= 1, ErrorKind::InvalidConfig,
          "Fock cutoff must be at least 1, got " + std::to_string(nmax));
}

FockCutoff FockCutoff::for_mean(double nbar) {
  require(nbar >= 0 && std::isfinite(nbar), ErrorKind::InvalidConfig,
          "mean photon number must be finite and non-negative");
  return FockCutoff(int(std::ceil(nbar + 8.0 * std::sqrt(nbar) + 10.0)));
}

void FockCutoff::require_mean(double nbar) const {
  const double need = nbar + 8.0 * std::sqrt(nbar);
  if (need > nmax_) {
    fail(ErrorKind::Truncation, "Fock cutoff " + std::to_string(nmax_) +
                                    " too small for mean photon number " +
                                    std::to_string(nbar) + "; need nmax >= " +
                                    std::to_string(int(std::ceil(need))));
  }
}

JointState::JointState(SpinQuantum spin, FockCutoff cutoff)
    : spin_(spin),
      cutoff_(cutoff),
      psi_(Eigen::VectorXcd::Zero(Eigen::Index(spin.dimension()) * cutoff.levels())) {}

JointState::JointState(SpinQuantum spin, FockCutoff cutoff, Eigen::VectorXcd amplitudes)
    : spin_(spin), cutoff_(cutoff), psi_(std::move(amplitudes)) {
  const Eigen::Index want = Eigen::Index(spin.dimension()) * cutoff.levels();
  require(psi_.size() == want, ErrorKind::InvalidConfig,
          "state has " + std::to_string(psi_.size()) + " amplitudes, expected " +
              std::to_string(want));
}

Eigen::Index JointState::flat(int dicke_index, int n) const {
  require(dicke_index >= 0 && dicke_index < spin_.dimension() && n >= 0 &&
              n <= cutoff_.nmax(),
          ErrorKind::Range, "basis label outside the truncated space");
  return Eigen::Index(dicke_index) * cutoff_.levels() + n;
}

std::pair<int, int> JointState::unflat(Eigen::Index k) const {
  require(k >= 0 && k < psi_.size(), ErrorKind::Range, "flat index out of range");
  return {int(k / cutoff_.levels()), int(k % cutoff_.levels())};
}

void JointState::normalize() {
  const double nrm = psi_.norm();
  require(nrm > 0, ErrorKind::Numerical, "cannot normalize a zero state");
  psi_ /= nrm;
}

double JointState::mean_photons() const {
  const int L = cutoff_.levels();
  double acc = 0;
  for (Eigen::Index k = 0; k < psi_.size(); ++k) acc += double(k % L) * std::norm(psi_[k]);
  return acc / norm_squared();
}

double JointState::excitation() const {
  const int L = cutoff_.levels();
  double acc = 0;
  for (Eigen::Index k = 0; k < psi_.size(); ++k) {
    const double jz = spin_.projection(int(k / L)).value();
    acc += (jz + double(k % L)) * std::norm(psi_[k]);
  }
  return acc / norm_squared();
}

double JointState::top_leakage(int levels) const {
  const int L = cutoff_.levels();
  double acc = 0;
  for (Eigen::Index k = 0; k < psi_.size(); ++k) {
    if (k % L > cutoff_.nmax() - levels) acc += std::norm(psi_[k]);
  }
  return acc / norm_squared();
}

double truncation_leakage(const JointState& state, bool absorbing, int levels) {
  const int L = state.cutoff().levels();
  const int nmax = state.cutoff().nmax();
  double acc = 0;
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    const int i = int(k / L), n = int(k % L);
    if (n > nmax - levels && (absorbing || n + i > nmax)) acc += std::norm(state.amplitudes()[k]);
  }
  return acc / state.norm_squared();
}

namespace {

Eigen::VectorXcd poisson_amplitudes(cplx alpha, int levels) {
  Eigen::VectorXcd v(levels);
  const double r = std::abs(alpha);
  if (r == 0) {
    v.setZero();
    v[0] = 1;
    return v;
  }
  const double lr = std::log(r);
  const double arg = std::arg(alpha);
  for (int k = 0; k < levels; ++k) {
    const double mag = std::exp(k * lr - 0.5 * std::lgamma(k + 1.0) - 0.5 * r * r);
    v[k] = std::polar(mag, k * arg);
  }
  v.normalize();
  return v;
}

}  // namespace

Eigen::VectorXcd coherent_field_state(cplx alpha, const FockCutoff& cutoff) {
  const double r = std::abs(alpha);
  if (r * r + 8.0 * r > cutoff.nmax()) {
    fail(ErrorKind::Truncation,
         "Fock cutoff " + std::to_string(cutoff.nmax()) + " too small for |alpha|=" +
             std::to_string(r) + "; need nmax >= " +
             std::to_string(int(std::ceil(r * r + 8.0 * r))));
  }
  return poisson_amplitudes(alpha, cutoff.levels());
}

Eigen::VectorXcd fock_state(int n, const FockCutoff& cutoff) {
  require(n >= 0 && n <= cutoff.nmax(), ErrorKind::Range,
          "Fock level " + std::to_string(n) + " beyond cutoff");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cutoff.levels());
  v[n] = 1;
  return v;
}

Eigen::VectorXcd dicke_state(const SpinQuantum& spin, Projection m) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(spin.dimension());
  v[spin.index(m)] = 1;
  return v;
}

Eigen::VectorXcd x_basis_state(const RotationMatrix& rot, Projection m) {
  const int i = rot.spin().index(m);
  return rot.entries().col(i).cast<cplx>();
}

JointState product_state(const SpinQuantum& spin, const FockCutoff& cutoff,
                         const Eigen::VectorXcd& atomic, const Eigen::VectorXcd& field) {
  require(atomic.size() == spin.dimension(), ErrorKind::InvalidConfig,
          "atomic vector has dimension " + std::to_string(atomic.size()) + ", expected " +
              std::to_string(spin.dimension()));
  require(field.size() == cutoff.levels(), ErrorKind::InvalidConfig,
          "field vector has dimension " + std::to_string(field.size()) + ", expected " +
              std::to_string(cutoff.levels()));
  JointState s(spin, cutoff);
  const int L = cutoff.levels();
  for (int i = 0; i < spin.dimension(); ++i)
    s.amplitudes().segment(Eigen::Index(i) * L, L) = atomic[i] * field;
  return s;
}

double excited_population(const JointState& state, Projection m) {
  const int L = state.cutoff().levels();
  const int i = state.spin().index(m);
  return state.amplitudes().segment(Eigen::Index(i) * L, L).squaredNorm();
}

std::vector<double> populations(const JointState& state) {
  const int L = state.cutoff().levels();
  std::vector<double> out(state.spin().dimension());
  for (int i = 0; i < state.spin().dimension(); ++i)
    out[i] = state.amplitudes().segment(Eigen::Index(i) * L, L).squaredNorm();
  return out;
}

std::vector<double> field_phase_distribution(const JointState& state, int bins) {
  require(bins >= 8, ErrorKind::InvalidConfig, "phase histogram needs at least 8 bins");
  const double nrm2 = state.norm_squared();
  require(std::abs(nrm2 - 1.0) < 1e-6, ErrorKind::Precondition,
          "phase distribution expects a normalized state");
  const int L = state.cutoff().levels();
  const double radius = std::sqrt(state.mean_photons());
  std::vector<double> hist(bins, 0.0);
  double total = 0;
  for (int b = 0; b < bins; ++b) {
    const double theta = -std::numbers::pi + (b + 0.5) * 2.0 * std::numbers::pi / bins;
    const Eigen::VectorXcd probe = poisson_amplitudes(std::polar(radius, theta), L);
    double q = 0;
    for (int i = 0; i < state.spin().dimension(); ++i)
      q += std::norm(probe.dot(state.amplitudes().segment(Eigen::Index(i) * L, L)));
    hist[b] = q;
    total += q;
  }
  if (total > 0)
    for (double& h : hist) h /= total;
  return hist;
}

SubspaceIndex::SubspaceIndex(const SpinQuantum& spin, int p) : spin_(spin), p_(p) {
  require(p >= -spin.atoms(), ErrorKind::Range,
          "subspace label p must be at least -2J, got " + std::to_string(p));
}

int SubspaceIndex::dimension() const { return std::min(spin_.atoms(), p_ + spin_.atoms()) + 1; }

std::vector<std::pair<int, int>> SubspaceIndex::members(const FockCutoff& cutoff) const {
  std::vector<std::pair<int, int>> out;
  for (int l = 0; l <= spin_.atoms(); ++l) {
    const int n = p_ + l;
    if (n < 0 || n > cutoff.nmax()) continue;
    out.emplace_back(spin_.atoms() - l, n);
  }
  return out;
}

int SubspaceIndex::label_of(const SpinQuantum& spin, int dicke_index, int n) {
  // |J,J−l⟩⊗|p+l⟩ with J−l ↔ Dicke index N−l
  return n - (spin.atoms() - dicke_index);
}

std::map<int, Eigen::VectorXcd> decompose(const JointState& state) {
  std::map<int, Eigen::VectorXcd> blocks;
  const int N = state.spin().atoms();
  for (int p = -N; p <= state.cutoff().nmax(); ++p) {
    const auto members = SubspaceIndex(state.spin(), p).members(state.cutoff());
    if (members.empty()) continue;
    Eigen::VectorXcd v(Eigen::Index(members.size()));
    for (std::size_t k = 0; k < members.size(); ++k)
      v[Eigen::Index(k)] = state.amplitudes()[state.flat(members[k].first, members[k].second)];
    blocks.emplace(p, std::move(v));
  }
  return blocks;
}

JointState recompose(const SpinQuantum& spin, const FockCutoff& cutoff,
                     const std::map<int, Eigen::VectorXcd>& blocks) {
  JointState s(spin, cutoff);
  for (const auto& [p, v] : blocks) {
    const auto members = SubspaceIndex(spin, p).members(cutoff);
    require(Eigen::Index(members.size()) == v.size(), ErrorKind::InvalidConfig,
            "subspace block " + std::to_string(p) + " has the wrong size");
    for (std::size_t k = 0; k < members.size(); ++k)
      s.amplitudes()[s.flat(members[k].first, members[k].second)] = v[Eigen::Index(k)];
  }
  return s;
}

void write_state_csv(const JointState& state, std::ostream& out) {
  out << "m,n,re,im\n";
  char line[160];
  const int L = state.cutoff().levels();
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    const double m = state.spin().projection(int(k / L)).value();
    const cplx a = state.amplitudes()[k];
    std::snprintf(line, sizeof line, "%.1f,%d,%.12g,%.12g\n", m, int(k % L), a.real(),
                  a.imag());
    out << line;
  }
  if (!out) fail(ErrorKind::Io, "failed writing state dump");
}

}  // namespace cavitas
