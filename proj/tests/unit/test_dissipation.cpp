// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "core/dissipation.hpp"
#include "core/error.hpp"
#include "core/exact_dynamics.hpp"
#include "core/master.hpp"
#include "core/montecarlo.hpp"

using namespace cavitas;
using std::numbers::pi;

namespace {

// Atoms parked in the ground state and decoupled: only the field evolves.
struct FieldOnly {
  SpinQuantum spin{1};
  FockCutoff cutoff;
  JointState initial;
  TrajectoryPlan plan;
};

FieldOnly field_only(double nbar, double gamma, double n_th, std::vector<double> times) {
  SpinQuantum spin(1);
  auto cutoff = FockCutoff::for_mean(std::max(nbar, 1.0) + 3 * n_th);
  auto init = product_state(spin, cutoff, dicke_state(spin, spin.bottom()),
                            coherent_field_state(std::sqrt(nbar), cutoff));
  TrajectoryPlan plan{CavityModel{spin, cutoff, 0.0, BathParams{gamma, n_th}}, std::move(times)};
  return {spin, cutoff, init, plan};
}

double field_mean(const Eigen::MatrixXcd& rho) {
  double n = 0;
  for (int k = 0; k < rho.rows(); ++k) n += k * rho(k, k).real();
  return n;
}

bool within(double mean, double err, double want, double slack = 0) {
  return std::abs(mean - want) <= 3 * err + slack;
}

}  // namespace

TEST_CASE("bath parameters") {
  BathParams b{0.2, 0.4};
  CHECK(b.kappa_t() == doctest::Approx(1.8));
  CHECK(b.emit_rate() == doctest::Approx(0.28));
  CHECK(b.absorb_rate() == doctest::Approx(0.08));
  CHECK_THROWS_AS((BathParams{-1, 0}).validate(), Error);
  CHECK_THROWS_AS((BathParams{1, -0.1}).validate(), Error);
}

TEST_CASE("free decoherence functional") {
  auto meso = MesoParams::make(SpinQuantum(3), 15, 1.0);
  BathParams bath{1.0 / 4310, 0};
  auto z = decoherence_free(1, 0.0, meso, bath);
  CHECK(z.d == 0.0);
  CHECK(z.theta == 0.0);
  CHECK(z.value() == cplx(1.0));
  CHECK(decoherence_free(0, 9.0, meso, bath).value() == cplx(1.0));

  double t_pi = time_of_phi(pi, 1.0, 15);
  auto e = decoherence_free(1, t_pi, meso, bath);
  CHECK(e.d == doctest::Approx(2 * std::pow(15.0, 1.5) * pi / 4310).epsilon(1e-12));
  CHECK(e.theta == doctest::Approx(4 * std::pow(15.0, 1.5) / 4310).epsilon(1e-12));

  // cubic onset
  double t_small = time_of_phi(1e-3, 1.0, 15);
  for (int q : {1, 2, 3}) {
    double want = std::pow(15.0, 1.5) / 4310 * q * q * 1e-9 / 3;
    CHECK(decoherence_free(q, t_small, meso, bath).d == doctest::Approx(want).epsilon(1e-6));
  }
  // continuity across the series switch
  for (int q : {1, 2}) {
    double edge = 1e-3 / q;
    double a = decoherence_free(q, time_of_phi(edge * (1 - 1e-9), 1.0, 15), meso, bath).d;
    double b = decoherence_free(q, time_of_phi(edge * (1 + 1e-9), 1.0, 15), meso, bath).d;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }

  for (double phi = 0.1; phi < 7; phi += 0.3)
    for (int q : {1, 2, 3}) {
      double t = time_of_phi(phi, 1.0, 15);
      auto p = decoherence_free(q, t, meso, bath), m = decoherence_free(-q, t, meso, bath);
      CHECK(m.d == doctest::Approx(p.d).epsilon(1e-14));
      CHECK(m.theta == doctest::Approx(-p.theta).epsilon(1e-14));
      CHECK(std::abs(p.value()) <= 1.0);
    }

  // |F| never grows on [0, 2π]
  for (int q : {1, 2, 3}) {
    double prev = 1.0;
    for (double phi = 0; phi <= 2 * pi; phi += 0.01) {
      double mag = std::abs(decoherence_free(q, time_of_phi(phi, 1.0, 15), meso, bath).value());
      CHECK(mag <= prev + 1e-15);
      prev = mag;
    }
  }

  // temperature enters through γ(1 + 2 n_th)
  BathParams warm{1.0 / 4310, 0.4};
  CHECK(decoherence_free(2, t_pi, meso, warm).d ==
        doctest::Approx(1.8 * decoherence_free(2, t_pi, meso, bath).d).epsilon(1e-12));
  CHECK_THROWS_AS(decoherence_free(1, -1.0, meso, bath), Error);
}

TEST_CASE("echo decoherence functional") {
  auto meso = MesoParams::make(SpinQuantum(2), 15, 1.0);
  BathParams bath{1.0 / 1540, 0};
  const double phi_pi = 0.8;
  const double t_pi = time_of_phi(phi_pi, 1.0, 15);
  for (int q : {1, 2}) {
    auto a = decoherence_echo(q, t_pi, t_pi, meso, bath);
    auto b = decoherence_free(q, t_pi, meso, bath);
    CHECK(a.d == doctest::Approx(b.d).epsilon(1e-12));
    CHECK(a.theta == doctest::Approx(b.theta).epsilon(1e-12));

    auto at2 = decoherence_echo(q, t_pi, 2 * t_pi, meso, bath);
    double s = 2 * std::pow(15.0, 1.5) / 1540;
    CHECK(at2.d == doctest::Approx(s * (2 * phi_pi - 2 * std::sin(q * phi_pi) / q)).epsilon(1e-12));
    CHECK(at2.d > 0);

    auto m = decoherence_echo(-q, t_pi, 1.7 * t_pi, meso, bath);
    auto p = decoherence_echo(q, t_pi, 1.7 * t_pi, meso, bath);
    CHECK(m.d == doctest::Approx(p.d));
    CHECK(m.theta == doctest::Approx(-p.theta));
  }
  CHECK(decoherence_echo(1, t_pi, 2 * t_pi, meso, BathParams{0, 0}).value() == cplx(1.0));
  CHECK(echo_overlap_time(2.0, 3.0) == 1.0);
  try {
    decoherence_echo(1, t_pi, 0.5 * t_pi, meso, bath);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("cat decoherence closed form") {
  for (double t : {0.0, 0.5, 3.0}) CHECK(cat_decoherence(0.0, t, 10, 1.0) == cplx(1.0));
  CHECK(std::abs(cat_decoherence(pi, 1e3, 4, 1.0) - std::exp(-8.0)) <= 1e-15);
  // short times: exp(n̄γt(e^{iθ} − 1))
  cplx shortt = std::exp(10.0 * 1e-4 * (std::polar(1.0, pi / 2) - 1.0));
  CHECK(std::abs(cat_decoherence(pi / 2, 1e-4, 10, 1.0) - shortt) <= 1e-7);
}

TEST_CASE("master equation: field decay") {
  FockCutoff cut(40);
  BathParams bath{0.5, 0};
  auto eq = field_master_equation(cut, bath);
  auto rho = pure_density(coherent_field_state(std::sqrt(10.0), cut));
  std::vector<double> times{0.5, 1.0, 2.0};
  eq.solve(rho, times, 0.002, [&](std::size_t k, const Eigen::MatrixXcd& r) {
    CHECK(field_mean(r) == doctest::Approx(10.0 * std::exp(-0.5 * times[k])).epsilon(1e-7));
    auto chk = check_density(r);
    CHECK(chk.trace_error < 1e-8);
    CHECK(chk.hermiticity_error < 1e-12);
    CHECK(chk.min_eigenvalue > -1e-8);
  });
}

TEST_CASE("master equation: thermal loading") {
  FockCutoff cut(25);
  BathParams bath{1.0, 0.4};
  auto eq = field_master_equation(cut, bath);
  auto rho = master_solve(eq, pure_density(fock_state(0, cut)), 0.47, 0.001);
  CHECK(field_mean(rho) == doctest::Approx(0.4 * (1 - std::exp(-0.47))).epsilon(1e-6));
  auto rho2 = pure_density(coherent_field_state(2.0, cut));
  rho2 = master_solve(eq, rho2, 1.0, 0.001);
  CHECK(field_mean(rho2) ==
        doctest::Approx(4 * std::exp(-1.0) + 0.4 * (1 - std::exp(-1.0))).epsilon(1e-6));
}

TEST_CASE("master equation: cat coherence oracle") {
  const double nbar = 4, theta = pi / 2, gamma = 1.0;
  FockCutoff cut(30);
  const cplx a = std::sqrt(nbar), b = a * std::polar(1.0, theta);
  Eigen::VectorXcd psi = coherent_field_state(a, cut) + coherent_field_state(b, cut);
  psi.normalize();
  auto eq = field_master_equation(cut, BathParams{gamma, 0});

  // ρ = Σ c_ij |i⟩⟨j| on the shrinking pair; recover c from the Gram matrix
  auto coefficients = [&](const Eigen::MatrixXcd& rho, double t) {
    const double s = std::exp(-gamma * t / 2);
    Eigen::MatrixXcd basis(cut.levels(), 2);
    basis.col(0) = coherent_field_state(a * s, cut);
    basis.col(1) = coherent_field_state(b * s, cut);
    Eigen::MatrixXcd gram = basis.adjoint() * basis;
    Eigen::MatrixXcd m = basis.adjoint() * rho * basis;
    Eigen::MatrixXcd gi = gram.inverse();
    return Eigen::MatrixXcd(gi * m * gi);
  };
  auto rho0 = pure_density(psi);
  cplx c0 = coefficients(rho0, 0)(1, 0);
  for (double t : {0.1, 0.4, 1.0}) {
    auto rho = master_solve(eq, rho0, t, 0.001);
    cplx ratio = coefficients(rho, t)(1, 0) / c0;
    CHECK(std::abs(ratio - cat_decoherence(theta, t, nbar, gamma)) < 1e-6);
  }
}

TEST_CASE("master equation without loss is unitary") {
  SpinQuantum spin(2);
  FockCutoff cut(26);
  TCParams p{1.0, spin, cut};
  auto init = product_state(spin, cut, dicke_state(spin, spin.top()), coherent_field_state(2.0, cut));
  auto eq = cavity_master_equation(spin, cut, 1.0, BathParams{0, 0});
  std::vector<double> times{0.5, 1.5, 3.0};
  auto exact = exact_rabi_series(init, p, IntegratorConfig::for_params(p), times, 4.0);
  Eigen::MatrixXcd rho = pure_density(init.amplitudes());
  eq.solve(rho, times, 0.002, [&](std::size_t k, const Eigen::MatrixXcd& r) {
    double top = 0;
    for (int n = 0; n <= 26; ++n) top += r(2 * 27 + n, 2 * 27 + n).real();
    CHECK(std::abs(top - exact.rows[k].p) < 1e-6);
  });
}

TEST_CASE("master equation refuses large spaces") {
  try {
    cavity_master_equation(SpinQuantum(3), FockCutoff(60), 1.0, BathParams{0.01, 0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("Monte Carlo") != std::string::npos);
  }
}

TEST_CASE("jump record ordering") {
  JumpRecord r;
  r.push(0.1, JumpChannel::Emit);
  r.push(0.2, JumpChannel::Absorb);
  r.push(0.3, JumpChannel::Emit);
  CHECK(r.count(JumpChannel::Emit) == 2);
  CHECK(r.count(JumpChannel::Absorb) == 1);
  CHECK_THROWS_AS(r.push(0.3, JumpChannel::Emit), Error);
  CHECK(std::string(to_string(JumpChannel::Absorb)) == "absorb");
}

TEST_CASE("lossless trajectory equals the exact integrator") {
  SpinQuantum spin(2);
  auto cut = FockCutoff::for_mean(15);
  TCParams p{1.0, spin, cut};
  auto init = product_state(spin, cut, dicke_state(spin, spin.top()),
                            coherent_field_state(std::sqrt(15.0), cut));
  std::vector<double> times;
  for (int k = 0; k <= 30; ++k) times.push_back(0.4 * k);
  auto exact = exact_rabi_series(init, p, IntegratorConfig::for_params(p), times, 15);
  TrajectoryPlan plan{CavityModel{spin, cut, 1.0, BathParams{0, 0}}, times};
  auto traj = mc_trajectory(init, plan, top_population_observable(), 42);
  CHECK(traj.jumps.size() == 0);
  for (std::size_t k = 0; k < times.size(); ++k) CHECK(traj.samples[k] == exact.rows[k].p);
}

TEST_CASE("coherent states survive jumps") {
  auto f = field_only(10, 1.0, 0, {0.3, 0.7});
  auto traj = mc_trajectory(f.initial, f.plan, photon_number_observable(), 5);
  REQUIRE(traj.jumps.size() > 0);
  auto probe = coherent_field_state(std::sqrt(10.0) * std::exp(-0.35), f.cutoff);
  auto field = JointState(f.spin, f.cutoff, traj.final_state);
  Eigen::VectorXcd ground = field.amplitudes().head(f.cutoff.levels());
  CHECK(std::norm(probe.dot(ground)) > 1 - 1e-9);
}

TEST_CASE("jump counts are Poissonian") {
  const double nbar = 10, gamma = 1.0, t = 0.1;
  auto f = field_only(nbar, gamma, 0, {t});
  auto res = mc_average(f.initial, f.plan, jump_count_observable(), {1000, 17, 1, false});
  double mean = nbar * (1 - std::exp(-gamma * t));
  CHECK(within(res.stats.mean_at(0, 0), res.stats.stderr_at(0, 0), mean));
  CHECK(res.stats.mean_at(0, 1) == 0.0);
  // Poisson variance equals the mean
  double var = std::pow(res.stats.stderr_at(0, 0), 2) * 1000;
  CHECK(var == doctest::Approx(mean).epsilon(0.15));
}

TEST_CASE("Monte Carlo cat coherence") {
  const double nbar = 10, theta = pi / 2;
  auto f = field_only(nbar, 1.0, 0, {0.05, 0.1});
  auto res = mc_average(f.initial, f.plan, jump_phase_observable(theta), {1000, 3, 1, false});
  for (std::size_t k = 0; k < 2; ++k) {
    cplx want = cat_decoherence(theta, f.plan.times[k], nbar, 1.0);
    CHECK(within(res.stats.mean_at(k, 0), res.stats.stderr_at(k, 0), want.real()));
    CHECK(within(res.stats.mean_at(k, 1), res.stats.stderr_at(k, 1), want.imag()));
  }
}

TEST_CASE("Monte Carlo pair phases reproduce the decoherence functional") {
  const double nbar = 15, g = 1.0, gamma = g / 1540;
  auto meso = MesoParams::make(SpinQuantum(2), nbar, g);
  BathParams bath{gamma, 0};
  std::vector<double> phis{pi / 2, pi, 2 * pi};
  std::vector<double> times;
  for (double phi : phis) times.push_back(time_of_phi(phi, g, nbar));
  auto f = field_only(nbar, gamma, 0, times);
  for (int q : {1, 2}) {
    auto res = mc_average(f.initial, f.plan, pair_phase_observable(q, g, nbar), {600, 9, 1, false});
    for (std::size_t k = 0; k < times.size(); ++k) {
      cplx want = decoherence_free(q, times[k], meso, bath).value();
      // 0.01 covers the slow field decay the functional neglects
      CHECK(within(res.stats.mean_at(k, 0), res.stats.stderr_at(k, 0), want.real(), 0.01));
      CHECK(within(res.stats.mean_at(k, 1), res.stats.stderr_at(k, 1), want.imag(), 0.01));
    }
  }

  const double t_pi = time_of_phi(0.8, g, nbar);
  std::vector<double> late{1.5 * t_pi, 2 * t_pi};
  auto e = field_only(nbar, gamma, 0, late);
  e.plan.echo_time = t_pi;
  auto res = mc_average(e.initial, e.plan, pair_phase_observable(1, g, nbar, t_pi), {600, 4, 1, false});
  for (std::size_t k = 0; k < late.size(); ++k) {
    cplx want = decoherence_echo(1, t_pi, late[k], meso, bath).value();
    CHECK(within(res.stats.mean_at(k, 0), res.stats.stderr_at(k, 0), want.real(), 0.01));
    CHECK(within(res.stats.mean_at(k, 1), res.stats.stderr_at(k, 1), want.imag(), 0.01));
  }
}

TEST_CASE("thermal Monte Carlo matches the field master equation") {
  const double gamma = 1.0, n_th = 0.4;
  auto f = field_only(4, gamma, n_th, {0.2, 0.6, 1.2});
  auto res = mc_average(f.initial, f.plan, photon_number_observable(), {800, 21, 1, true});
  auto eq = field_master_equation(f.cutoff, BathParams{gamma, n_th});
  Eigen::MatrixXcd rho = pure_density(coherent_field_state(2.0, f.cutoff));
  eq.solve(rho, f.plan.times, 0.001, [&](std::size_t k, const Eigen::MatrixXcd& r) {
    CHECK(within(res.stats.mean_at(k), res.stats.stderr_at(k), field_mean(r)));
  });
  long absorbed = 0;
  for (auto& rec : res.jumps) absorbed += rec.count(JumpChannel::Absorb);
  CHECK(absorbed > 0);
}

TEST_CASE("Monte Carlo agrees with the master equation for a coupled atom") {
  SpinQuantum spin(1);
  FockCutoff cut(30);
  const double nbar = 6, g = 1.0;
  BathParams bath{g / 308, 0};
  auto init = product_state(spin, cut, dicke_state(spin, spin.top()),
                            coherent_field_state(std::sqrt(nbar), cut));
  std::vector<double> times;
  for (int k = 1; k <= 12; ++k) times.push_back(2.5 * k);
  TrajectoryPlan plan{CavityModel{spin, cut, g, bath}, times};
  auto res = mc_average(init, plan, top_population_observable(), {400, 77, 1, false});
  auto eq = cavity_master_equation(spin, cut, g, bath);
  int inside = 0;
  Eigen::MatrixXcd rho = pure_density(init.amplitudes());
  eq.solve(rho, times, 0.01, [&](std::size_t k, const Eigen::MatrixXcd& r) {
    double top = 0;
    for (int n = 0; n <= 30; ++n) top += r(31 + n, 31 + n).real();
    if (within(res.stats.mean_at(k), res.stats.stderr_at(k), top)) ++inside;
  });
  CHECK(inside >= 11);
}

TEST_CASE("ensembles are reproducible and thread-count independent") {
  auto f = field_only(6, 0.5, 0.2, {0.5, 1.0});
  auto a = mc_average(f.initial, f.plan, photon_number_observable(), {100, 8, 1, false});
  auto b = mc_average(f.initial, f.plan, photon_number_observable(), {100, 8, 4, false});
  auto c = mc_average(f.initial, f.plan, photon_number_observable(), {100, 9, 1, false});
  REQUIRE(a.stats.mean.size() == b.stats.mean.size());
  CHECK(std::memcmp(a.stats.mean.data(), b.stats.mean.data(), a.stats.mean.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.stats.stderr_.data(), b.stats.stderr_.data(), a.stats.stderr_.size() * sizeof(double)) == 0);
  CHECK(a.stats.mean != c.stats.mean);
  CHECK(trajectory_seed(1, 0) != trajectory_seed(1, 1));
  CHECK(trajectory_seed(1, 0) != trajectory_seed(2, 0));
}

TEST_CASE("standard error shrinks as the square root of the ensemble") {
  auto f = field_only(6, 0.5, 0, {1.0});
  auto small = mc_average(f.initial, f.plan, jump_count_observable(), {300, 12, 1, false});
  auto large = mc_average(f.initial, f.plan, jump_count_observable(), {1200, 13, 1, false});
  double ratio = small.stats.stderr_at(0) / large.stats.stderr_at(0);
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("ensemble bookkeeping errors") {
  EnsembleAccumulator a(3, 1), b(4, 1);
  CHECK_THROWS_AS(a.merge(b), Error);
  try {
    a.add({1.0, 2.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidConfig);
  }
  a.add({1.0, 2.0, 3.0});
  try {
    a.finish();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  a.add({3.0, 2.0, 1.0});
  auto s = a.finish();
  CHECK(s.mean_at(0) == 2.0);
  CHECK(s.stderr_at(0) == doctest::Approx(1.0));
  CHECK(s.stderr_at(1) == 0.0);

  auto f = field_only(6, 0.5, 0, {1.0});
  CHECK_THROWS_AS(mc_average(f.initial, f.plan, photon_number_observable(), {1, 1, 1, false}), Error);
  auto bad = f.plan;
  bad.times = {1.0, 0.5};
  CHECK_THROWS_AS(mc_trajectory(f.initial, bad, photon_number_observable(), 1), Error);
}

TEST_CASE("a jump barely disturbs a Gea-Banacloche component") {
  const double nbar = 15;
  auto cut = FockCutoff::for_mean(nbar);
  auto meso = MesoParams::make(SpinQuantum(3), nbar, 1.0);
  for (double phi : {0.25, 0.5, 1.0, 2.0, pi}) {
    double t = time_of_phi(phi, 1.0, nbar);
    auto v = gb_field_state(Projection{3}, t, meso, cut);
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(v.size());
    for (Eigen::Index k = 1; k < v.size(); ++k) w[k - 1] = std::sqrt(double(k)) * v[k];
    double infidelity = 1 - std::norm(w.normalized().dot(v));
    double scale = std::pow(1.5 * t / nbar, 2);
    CHECK(infidelity < 0.1 * scale);
    CHECK(infidelity > 0.03 * scale);
  }
}

TEST_CASE("dissipative envelopes") {
  const double nbar = 15;
  auto cut = FockCutoff::for_mean(nbar);
  for (int n : {1, 2, 3}) {
    auto meso = MesoParams::make(SpinQuantum(n), nbar, 1.0);
    for (double phi = 0; phi < 7; phi += 0.5) {
      double t = time_of_phi(phi, 1.0, nbar);
      auto a = dissipative_envelopes(t, meso, cut, BathParams{0, 0});
      auto b = envelopes(t, meso, cut);
      CHECK(a.upper == b.upper);
      CHECK(a.lower == b.lower);
    }
  }
  auto contrast = [&](int n, double g_over_gamma, double n_th, double phi) {
    auto meso = MesoParams::make(SpinQuantum(n), nbar, 1.0);
    auto e = dissipative_envelopes(time_of_phi(phi, 1.0, nbar), meso, cut,
                                   BathParams{1.0 / g_over_gamma, n_th});
    return e.upper - e.lower;
  };
  // frozen values of the analytic model
  CHECK(contrast(1, 308, 0, 2 * pi) == doctest::Approx(0.0511).epsilon(2e-3));
  CHECK(contrast(1, 4310, 0, 2 * pi) == doctest::Approx(0.4616).epsilon(2e-3));
  CHECK(contrast(2, 1540, 0, pi) == doctest::Approx(0.1091).epsilon(2e-3));
  CHECK(contrast(3, 1540, 0, pi) == doctest::Approx(0.1618).epsilon(2e-3));
  CHECK(contrast(3, 1540, 0.4, pi) == doctest::Approx(0.1338).epsilon(2e-3));
  CHECK(contrast(1, 308, 0, 2 * pi) < 0.15 * contrast(1, 1e12, 0, 2 * pi));

  // echo: just after the pulse the envelope continues the free one
  auto meso = MesoParams::make(SpinQuantum(2), nbar, 1.0);
  BathParams bath{1.0 / 1540, 0};
  double t_pi = time_of_phi(0.8, 1.0, nbar);
  DissipativeEnvelopes echo(meso, cut, bath, t_pi);
  auto before = echo.at(t_pi * (1 - 1e-9));
  auto after = echo.at(t_pi * (1 + 1e-9));
  CHECK(after.upper == doctest::Approx(before.upper).epsilon(1e-6));
  CHECK(after.lower == doctest::Approx(before.lower).epsilon(1e-6));
  // at 2t_π the overlaps are back to one and only damping remains
  auto refocus = echo.at(2 * t_pi);
  auto d = echo.damping(2 * t_pi);
  auto a = signal_coefficients(meso.spin.top(), meso.spin.top(), rotation_matrix(meso.spin));
  double want = a.baseline().real();
  for (int q = 1; q <= 2; ++q) want += 2 * std::abs(a[q]) * d[q - 1];
  CHECK(refocus.upper == doctest::Approx(want).epsilon(1e-9));
}
