// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/generator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace cavitas {

CavityGenerator::CavityGenerator(const SpinQuantum& spin, const FockCutoff& cutoff,
                                 double g, double emit_rate, double absorb_rate)
    : spin_(spin), cutoff_(cutoff), g_(g), emit_(emit_rate), absorb_(absorb_rate) {
  require(g >= 0 && std::isfinite(g), ErrorKind::InvalidConfig,
          "coupling must be finite and non-negative");
  require(emit_rate >= 0 && absorb_rate >= 0 && std::isfinite(emit_rate) &&
              std::isfinite(absorb_rate),
          ErrorKind::InvalidConfig, "jump rates must be finite and non-negative");
  const int d = spin.dimension();
  const int L = cutoff.levels();
  const int nmax = cutoff.nmax();
  up_.assign(std::size_t(d) * L, 0.0);
  down_.assign(std::size_t(d) * L, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int n = 0; n < L; ++n) {
      const std::size_t k = std::size_t(i) * L + n;
      if (i >= 1 && n < nmax)
        up_[k] = 0.5 * g * spin.raising(spin.projection(i - 1)) * std::sqrt(n + 1.0);
      if (i + 1 < d && n >= 1)
        down_[k] = 0.5 * g * spin.lowering(spin.projection(i + 1)) * std::sqrt(double(n));
    }
  }
  damp_.assign(L, 0.0);
  for (int n = 0; n < L; ++n)
    damp_[n] = 0.5 * (emit_rate * n + (n < nmax ? absorb_rate * (n + 1.0) : 0.0));
}

void CavityGenerator::hamiltonian(const cplx* in, cplx* out) const {
  const int d = spin_.dimension();
  const int L = cutoff_.levels();
  for (int i = 0; i < d; ++i) {
    const std::size_t row = std::size_t(i) * L;
    for (int n = 0; n < L; ++n) {
      const std::size_t k = row + n;
      cplx acc = 0;
      if (up_[k] != 0.0) acc += up_[k] * in[k - L + 1];
      if (down_[k] != 0.0) acc += down_[k] * in[k + L - 1];
      out[k] = acc;
    }
  }
}

void CavityGenerator::derivative(const cplx* in, cplx* out) const {
  const int d = spin_.dimension();
  const int L = cutoff_.levels();
  for (int i = 0; i < d; ++i) {
    const std::size_t row = std::size_t(i) * L;
    const double* up = up_.data() + row;
    const double* dn = down_.data() + row;
    for (int n = 0; n < L; ++n) {
      const std::size_t k = row + n;
      double re = 0, im = 0;
      if (up[n] != 0.0) {
        re += up[n] * in[k - L + 1].real();
        im += up[n] * in[k - L + 1].imag();
      }
      if (dn[n] != 0.0) {
        re += dn[n] * in[k + L - 1].real();
        im += dn[n] * in[k + L - 1].imag();
      }
      // −i(re + i im) − damp·in
      out[k] = cplx(im - damp_[n] * in[k].real(), -re - damp_[n] * in[k].imag());
    }
  }
}

double CavityGenerator::emission_weight(const Eigen::VectorXcd& psi) const {
  const int L = cutoff_.levels();
  double acc = 0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) acc += double(k % L) * std::norm(psi[k]);
  return emit_ * acc;
}

double CavityGenerator::absorption_weight(const Eigen::VectorXcd& psi) const {
  const int L = cutoff_.levels();
  double acc = 0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    const int n = int(k % L);
    if (n < cutoff_.nmax()) acc += (n + 1.0) * std::norm(psi[k]);
  }
  return absorb_ * acc;
}

void CavityGenerator::emit(Eigen::VectorXcd& psi) const {
  const int L = cutoff_.levels();
  for (int i = 0; i < spin_.dimension(); ++i) {
    cplx* row = psi.data() + std::size_t(i) * L;
    for (int n = 0; n < L - 1; ++n) row[n] = std::sqrt(n + 1.0) * row[n + 1];
    row[L - 1] = 0;
  }
}

void CavityGenerator::absorb(Eigen::VectorXcd& psi) const {
  const int L = cutoff_.levels();
  for (int i = 0; i < spin_.dimension(); ++i) {
    cplx* row = psi.data() + std::size_t(i) * L;
    for (int n = L - 1; n >= 1; --n) row[n] = std::sqrt(double(n)) * row[n - 1];
    row[0] = 0;
  }
}

namespace {

double coupling_scale(const CavityGenerator& gen) {
  return gen.g() * std::sqrt(double(gen.cutoff().nmax()));
}

double damping_scale(const CavityGenerator& gen) {
  return (gen.emit_rate() + gen.absorb_rate()) * gen.cutoff().nmax();
}

}  // namespace

double max_stable_step(const CavityGenerator& gen, double courant) {
  require(courant > 0 && courant <= kMaxCourant, ErrorKind::InvalidConfig,
          "courant number must lie in (0, 0.05]");
  const double c = coupling_scale(gen) * 0.5 * (gen.spin().atoms() + 1);
  const double scale = std::max(c, damping_scale(gen));
  if (scale == 0) return std::numeric_limits<double>::infinity();
  return courant / scale;
}

void check_step(const CavityGenerator& gen, double dt) {
  require(dt > 0, ErrorKind::InvalidConfig, "time step must be positive");
  const double a = dt * coupling_scale(gen);
  const double b = dt * damping_scale(gen);
  const double limit = kMaxCourant * (1.0 + 1e-9);
  if (a > limit || b > limit) {
    std::ostringstream os;
    os << "time step " << dt << " too coarse: dt*g*sqrt(nmax)=" << a
       << ", dt*rate*nmax=" << b << " (limit " << kMaxCourant << ")";
    fail(ErrorKind::InvalidConfig, os.str());
  }
}

MultistepPropagator::MultistepPropagator(const CavityGenerator& gen)
    : gen_(&gen), f_(4) {
  const Eigen::Index n = gen.size();
  for (auto& v : f_) v.resize(n);
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  tmp_.resize(n);
}

void MultistepPropagator::reset(double h) {
  h_ = h;
  filled_ = 0;
}

void MultistepPropagator::scale(double s) {
  for (int k = 0; k < filled_; ++k) f_[k] *= s;
}

void MultistepPropagator::rk4(const Eigen::VectorXcd& y0, double tau,
                              Eigen::VectorXcd& out) const {
  gen_->derivative(y0.data(), k1_.data());
  tmp_ = y0 + (0.5 * tau) * k1_;
  gen_->derivative(tmp_.data(), k2_.data());
  tmp_ = y0 + (0.5 * tau) * k2_;
  gen_->derivative(tmp_.data(), k3_.data());
  tmp_ = y0 + tau * k3_;
  gen_->derivative(tmp_.data(), k4_.data());
  out = y0 + (tau / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

void MultistepPropagator::step(Eigen::VectorXcd& y) {
  if (filled_ == 0) {
    gen_->derivative(y.data(), f_[0].data());
    filled_ = 1;
  }
  if (filled_ < 4) {
    rk4(y, h_, y);
  } else {
    const double c = h_ / 24.0;
    y += c * (55.0 * f_[0] - 59.0 * f_[1] + 37.0 * f_[2] - 9.0 * f_[3]);
  }
  f_[3].swap(f_[2]);
  f_[2].swap(f_[1]);
  f_[1].swap(f_[0]);
  gen_->derivative(y.data(), f_[0].data());
  if (filled_ < 4) ++filled_;
}

Evolution::Evolution(const CavityGenerator& gen, Eigen::VectorXcd psi, double t0,
                     double dt_max)
    : gen_(&gen), psi_(std::move(psi)), t_(t0), dt_max_(dt_max), prop_(gen) {
  require(psi_.size() == gen.size(), ErrorKind::InvalidConfig,
          "state dimension does not match the generator");
  require(dt_max > 0, ErrorKind::InvalidConfig, "time step must be positive");
}

void Evolution::arm(const JumpHooks* hooks) {
  requested_ = hooks;
  hooks_ = (hooks != nullptr && gen_->monitored()) ? hooks : nullptr;
  if (hooks_ != nullptr) threshold_ = hooks_->threshold();
}

void Evolution::switch_generator(const CavityGenerator& gen, double dt_max) {
  require(gen.size() == gen_->size(), ErrorKind::InvalidConfig,
          "replacement generator acts on a different space");
  require(dt_max > 0, ErrorKind::InvalidConfig, "time step must be positive");
  const bool was_armed = hooks_ != nullptr;
  gen_ = &gen;
  prop_ = MultistepPropagator(gen);
  dt_max_ = dt_max;
  fresh_ = true;
  hooks_ = (requested_ != nullptr && gen.monitored()) ? requested_ : nullptr;
  if (hooks_ != nullptr && !was_armed) threshold_ = hooks_->threshold();
}

void Evolution::advance_to(double t_target) {
  const double span = t_target - t_;
  if (span < -1e-12 * std::max(1.0, std::abs(t_))) {
    fail(ErrorKind::Precondition, "cannot propagate backwards in time");
  }
  if (span <= 0) return;
  long steps = 1;
  if (std::isfinite(dt_max_)) steps = std::max(1L, long(std::ceil(span / dt_max_ - 1e-9)));
  const double h = span / double(steps);
  if (fresh_ || std::abs(h - prop_.step_size()) > 1e-12 * h) {
    prop_.reset(h);
    fresh_ = false;
  }
  const double t_start = t_;
  for (long s = 0; s < steps; ++s) {
    if (hooks_ != nullptr) prev_ = psi_;
    prop_.step(psi_);
    if (hooks_ != nullptr && psi_.squaredNorm() < threshold_)
      locate_and_jump(prev_, t_start + double(s) * h, h);
  }
  t_ = t_target;
}

void Evolution::locate_and_jump(const Eigen::VectorXcd& y0, double t0, double h) {
  Eigen::VectorXcd cur = y0;
  Eigen::VectorXcd trial(cur.size());
  double remaining = h;
  double tcur = t0;
  for (;;) {
    double lo = 0, hi = remaining;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      prop_.rk4(cur, mid, trial);
      if (trial.squaredNorm() < threshold_) hi = mid;
      else lo = mid;
    }
    prop_.rk4(cur, hi, cur);
    tcur += hi;
    remaining -= hi;
    hooks_->jump(tcur, cur);
    threshold_ = hooks_->threshold();
    if (remaining <= 0) break;
    prop_.rk4(cur, remaining, trial);
    if (trial.squaredNorm() >= threshold_) {
      cur.swap(trial);
      break;
    }
  }
  psi_.swap(cur);
  prop_.reset(h);
}

double Evolution::renormalize() {
  const double n2 = psi_.squaredNorm();
  require(n2 > 0 && std::isfinite(n2), ErrorKind::Numerical,
          "state norm collapsed during propagation");
  const double s = 1.0 / std::sqrt(n2);
  psi_ *= s;
  prop_.scale(s);
  threshold_ /= n2;
  return std::abs(1.0 - n2);
}

}  // namespace cavitas

namespace cavitas {

void run_sampled(Evolution& evo, const std::vector<double>& times,
                 std::optional<double> echo_time,
                 const std::function<void(Eigen::VectorXcd&)>& echo,
                 const std::function<void(std::size_t, const Eigen::VectorXcd&, double)>& on_sample) {
  bool echoed = !echo_time.has_value();
  for (std::size_t k = 0; k < times.size(); ++k) {
    require(k == 0 || times[k] > times[k - 1], ErrorKind::Precondition,
            "sample times must be strictly increasing");
    if (!echoed && *echo_time < times[k]) {
      evo.advance_to(*echo_time);
      echo(evo.mutable_state());
      evo.restart();
      echoed = true;
    }
    evo.advance_to(times[k]);
    const double drift = evo.renormalize();
    on_sample(k, evo.state(), drift);
  }
}

}  // namespace cavitas
