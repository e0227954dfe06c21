// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "core/error.hpp"
#include "core/exact_dynamics.hpp"
#include "core/mesoscopic.hpp"

using namespace cavitas;
using std::numbers::pi;

namespace {

struct Problem {
  TCParams params;
  JointState initial;
  double nbar;
};

Problem coherent_problem(int n_atoms, double nbar, double g = 1.0) {
  SpinQuantum spin(n_atoms);
  auto cutoff = FockCutoff::for_mean(nbar);
  return {TCParams{g, spin, cutoff},
          product_state(spin, cutoff, dicke_state(spin, spin.top()),
                        coherent_field_state(std::sqrt(nbar), cutoff)),
          nbar};
}

JointState random_state(const SpinQuantum& spin, const FockCutoff& cutoff, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(Eigen::Index(spin.dimension()) * cutoff.levels());
  for (auto& x : v) x = cplx(d(rng), d(rng));
  return JointState(spin, cutoff, v.normalized());
}

std::vector<double> phi_times(double lo, double hi, double step, double g, double nbar) {
  std::vector<double> t;
  for (double phi = lo; phi <= hi + 1e-12; phi += step) t.push_back(time_of_phi(phi, g, nbar));
  return t;
}

double energy(const JointState& s, const TCParams& p) {
  return s.amplitudes().dot(apply_hamiltonian(s, p).amplitudes()).real();
}

double pk_pk(const RabiSeries& s, double lo, double hi) {
  double a = 1e9, b = -1e9;
  for (auto& r : s.rows)
    if (r.phi >= lo && r.phi <= hi) {
      a = std::min(a, r.p);
      b = std::max(b, r.p);
    }
  return b - a;
}

}  // namespace

TEST_CASE("Hamiltonian action") {
  SpinQuantum spin(1);
  FockCutoff cut(4);
  TCParams p{0.8, spin, cut};
  auto ground = product_state(spin, cut, dicke_state(spin, spin.bottom()), fock_state(0, cut));
  CHECK(apply_hamiltonian(ground, p).amplitudes().norm() == 0.0);

  auto up = product_state(spin, cut, dicke_state(spin, spin.top()), fock_state(0, cut));
  auto h = apply_hamiltonian(up, p);
  CHECK(std::abs(h.at(spin.bottom(), 1) - 0.4) <= 1e-15);
  CHECK(std::abs(h.amplitudes().norm() - 0.4) <= 1e-15);
}

TEST_CASE("Hamiltonian matches the dense Kronecker form") {
  SpinQuantum spin(3);
  FockCutoff cut(12);
  TCParams p{1.3, spin, cut};
  auto ops = collective_operators(spin);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(13, 13);
  for (int n = 1; n <= 12; ++n) a(n - 1, n) = std::sqrt(double(n));
  // flat index i·L + n ⇒ spin ⊗ field in Kronecker order
  auto kron = [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd out(x.rows() * y.rows(), x.cols() * y.cols());
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  Eigen::MatrixXd h = 0.65 * (kron(ops.jplus, a) + kron(ops.jminus, a.transpose()));
  auto s = random_state(spin, cut, 11);
  Eigen::VectorXcd want = h.cast<cplx>() * s.amplitudes();
  CHECK((apply_hamiltonian(s, p).amplitudes() - want).norm() <= 1e-13);

  auto t = random_state(spin, cut, 12);
  cplx lhs = t.amplitudes().dot(apply_hamiltonian(s, p).amplitudes());
  cplx rhs = std::conj(s.amplitudes().dot(apply_hamiltonian(t, p).amplitudes()));
  CHECK(std::abs(lhs - rhs) <= 1e-13);

  CHECK_THROWS_AS(apply_hamiltonian(s, TCParams{1.0, SpinQuantum(2), cut}), Error);
}

TEST_CASE("evolution over zero time is the identity") {
  auto pr = coherent_problem(2, 15);
  auto out = evolve(pr.initial, pr.params, IntegratorConfig::for_params(pr.params), 0.0);
  CHECK((out.amplitudes() - pr.initial.amplitudes()).norm() == 0.0);
  CHECK_THROWS_AS(evolve(pr.initial, pr.params, IntegratorConfig::for_params(pr.params), -1.0),
                  Error);
}

TEST_CASE("coarse steps are rejected before running") {
  auto pr = coherent_problem(1, 15);
  IntegratorConfig bad{0.1};
  try {
    evolve(pr.initial, pr.params, bad, 1.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
  }
  CHECK_NOTHROW(IntegratorConfig::for_params(pr.params, kMaxCourant).validate(pr.params));
  CHECK_THROWS_AS(IntegratorConfig::for_params(pr.params, 2 * kMaxCourant).validate(pr.params),
                  Error);
}

TEST_CASE("vacuum Rabi oscillation") {
  SpinQuantum spin(1);
  FockCutoff cut(1);
  const double g = 2.0;
  TCParams p{g, spin, cut};
  auto init = product_state(spin, cut, dicke_state(spin, spin.top()), fock_state(0, cut));
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.1 * k);
  auto s = exact_rabi_series(init, p, IntegratorConfig::for_params(p), times, 1.0);
  double worst = 0;
  for (auto& r : s.rows) worst = std::max(worst, std::abs(r.p - std::pow(std::cos(g * r.t / 2), 2)));
  CHECK(worst < 1e-6);
  CHECK(s.rows.front().p == 1.0);
  for (auto& r : s.rows) CHECK(r.p_stderr == 0.0);
}

TEST_CASE("short-time population follows the classical-field Rabi law") {
  auto pr = coherent_problem(1, 40);
  auto integ = IntegratorConfig::for_params(pr.params);
  for (double theta : {0.3, 0.6, 1.0}) {
    double t = 2 * theta / std::sqrt(pr.nbar);  // gt√n̄/2 = θ
    auto s = evolve(pr.initial, pr.params, integ, t);
    CHECK(excited_population(s, pr.params.spin.top()) ==
          doctest::Approx(std::pow(std::cos(theta), 2)).epsilon(0.02));
  }
}

TEST_CASE("one-atom collapse and revival") {
  auto pr = coherent_problem(1, 15);
  auto times = phi_times(0, 7, 0.01, 1.0, 15);
  auto s = exact_rabi_series(pr.initial, pr.params, IntegratorConfig::for_params(pr.params),
                             times, 15);
  CHECK(s.max_norm_drift < 1e-9);
  // collapsed well before the revival, oscillating again near 2π
  CHECK(pk_pk(s, 2.5, 3.8) < 0.05);
  CHECK(pk_pk(s, 2 * pi - 0.3, 2 * pi + 0.3) > 0.3);
  double peak_phi = 0, peak = -1;
  for (auto& r : s.rows)
    if (r.phi > 4.5 && r.p > peak) {
      peak = r.p;
      peak_phi = r.phi;
    }
  CHECK(std::abs(peak_phi - 2 * pi) < 0.4);

  double mean = 0;
  int n = 0;
  for (auto& r : s.rows)
    if (r.phi >= 2.5 && r.phi <= 3.8) {
      mean += r.p;
      ++n;
    }
  auto meso = MesoParams::make(SpinQuantum(1), 15, 1.0);
  auto a0 = signal_coefficients(Projection{1}, Projection{1}, rotation_matrix(meso.spin)).baseline();
  CHECK(std::abs(mean / n - a0.real()) < 0.05);
}

TEST_CASE("three-atom partial revivals") {
  auto pr = coherent_problem(3, 15);
  auto times = phi_times(0, 3.6, 0.01, 1.0, 15);
  auto s = exact_rabi_series(pr.initial, pr.params, IntegratorConfig::for_params(pr.params),
                             times, 15);
  double quiet = pk_pk(s, 1.4, 1.7);
  CHECK(pk_pk(s, 2 * pi / 3 - 0.15, 2 * pi / 3 + 0.15) > 3 * quiet);
  CHECK(pk_pk(s, pi - 0.15, pi + 0.15) > 3 * quiet);
}

TEST_CASE("excitation and energy are conserved") {
  for (int n : {1, 2, 3}) {
    auto pr = coherent_problem(n, 15);
    auto integ = IntegratorConfig::for_params(pr.params);
    double exc0 = pr.initial.excitation(), e0 = energy(pr.initial, pr.params);
    auto s = pr.initial;
    double dt = time_of_phi(pi / 2, 1.0, 15);
    for (int k = 0; k < 4; ++k) {
      EvolveReport rep;
      s = evolve(s, pr.params, integ, dt, &rep);
      CHECK(rep.norm_drift < 1e-9);
      CHECK(std::abs(s.excitation() - exc0) < 1e-8);
      CHECK(std::abs(energy(s, pr.params) - e0) < 1e-8);
    }
  }
}

TEST_CASE("echo pulse") {
  SpinQuantum spin(3);
  FockCutoff cut(20);
  TCParams p{1.0, spin, cut};
  auto s = random_state(spin, cut, 5);
  auto twice = apply_echo(apply_echo(s));
  CHECK((twice.amplitudes() - s.amplitudes()).norm() <= 1e-15);

  // (−1)^(J−m) up to one global sign
  auto e = apply_echo(s);
  cplx global = e.at(spin.top(), 0) / s.at(spin.top(), 0);
  CHECK(std::abs(std::abs(global) - 1.0) <= 1e-14);
  for (auto m : spin.projections())
    for (int n = 0; n <= 20; n += 5) {
      double sign = ((spin.atoms() - m.twice) / 2) % 2 == 0 ? 1.0 : -1.0;
      CHECK(std::abs(e.at(m, n) - global * sign * s.at(m, n)) <= 1e-14);
    }
  for (unsigned seed : {1u, 2u, 3u}) {
    auto r = random_state(spin, cut, seed);
    CHECK(energy(apply_echo(r), p) == doctest::Approx(-energy(r, p)).epsilon(1e-12));
  }
}

TEST_CASE("echo refocuses the populations") {
  for (int n : {1, 2, 3}) {
    auto pr = coherent_problem(n, 15);
    auto integ = IntegratorConfig::for_params(pr.params);
    double tpi = time_of_phi(0.8, 1.0, 15);
    auto s = evolve(apply_echo(evolve(pr.initial, pr.params, integ, tpi)), pr.params, integ, tpi);
    auto a = populations(s), b = populations(pr.initial);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-6);
  }
}

TEST_CASE("time reversal identity") {
  // U(τ)·echo·U(τ) = echo, so evolving the echoed state forward undoes the first leg
  auto pr = coherent_problem(2, 15);
  auto integ = IntegratorConfig::for_params(pr.params);
  double tau = time_of_phi(0.5, 1.0, 15);
  auto lhs = evolve(apply_echo(evolve(pr.initial, pr.params, integ, tau)), pr.params, integ, tau);
  auto rhs = apply_echo(pr.initial);
  CHECK((lhs.amplitudes() - rhs.amplitudes()).norm() < 1e-6);
}

TEST_CASE("fourth-order convergence") {
  auto pr = coherent_problem(1, 15);
  double t = time_of_phi(1.0, 1.0, 15);
  auto ref = evolve(pr.initial, pr.params, IntegratorConfig::for_params(pr.params, 0.002), t);
  auto err = [&](double courant) {
    auto s = evolve(pr.initial, pr.params, IntegratorConfig::for_params(pr.params, courant), t);
    return (s.amplitudes() - ref.amplitudes()).norm();
  };
  double coarse = err(0.05), fine = err(0.025);
  CHECK(coarse / fine > 11);
  CHECK(coarse / fine < 22);
}

TEST_CASE("series bookkeeping") {
  auto pr = coherent_problem(1, 15);
  auto times = phi_times(0, 1, 0.25, 1.0, 15);
  auto s = exact_rabi_series(pr.initial, pr.params, IntegratorConfig::for_params(pr.params),
                             times, 15);
  REQUIRE(s.rows.size() == times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(s.rows[k].t == times[k]);
    CHECK(s.rows[k].phi == doctest::Approx(phi_of_time(times[k], 1.0, 15)));
  }
  CHECK(s.rows[0].p == doctest::Approx(1.0));
  CHECK(phi_of_time(time_of_phi(2.5, 0.3, 10), 0.3, 10) == doctest::Approx(2.5));
}
