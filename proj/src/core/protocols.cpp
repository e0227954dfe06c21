// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/exact_dynamics.hpp"
#include "core/master.hpp"

namespace cavitas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> times_of(const std::vector<double>& phis, double g, double nbar) {
  std::vector<double> t(phis.size());
  for (std::size_t k = 0; k < phis.size(); ++k) t[k] = time_of_phi(phis[k], g, nbar);
  return t;
}

struct RunSpec {
  std::vector<double> phis;
  std::optional<double> echo_time;
  double prep_duration = 0;
  double field_amplitude = 0;
};

RabiSeries simulate(const ExperimentConfig& cfg, const Setup& s, const RunSpec& spec) {
  require(!spec.phis.empty(), ErrorKind::InvalidConfig, "empty phi grid");
  const std::vector<double> times = times_of(spec.phis, s.g, s.meso.nbar);
  const JointState initial =
      product_state(s.spin, s.cutoff, dicke_state(s.spin, s.spin.top()),
                    coherent_field_state(spec.field_amplitude, s.cutoff));
  RabiSeries series;
  const bool closed = s.bath.gamma == 0 && spec.prep_duration == 0;
  if (closed) {
    const TCParams params{s.g, s.spin, s.cutoff};
    series = exact_rabi_series(initial, params, IntegratorConfig::for_params(params, cfg.courant),
                               times, s.meso.nbar, spec.echo_time);
  } else {
    TrajectoryPlan plan{CavityModel{s.spin, s.cutoff, s.g, s.bath}, times, spec.echo_time,
                        spec.prep_duration, 0.0, cfg.courant};
    const Observable obs = top_population_observable();
    series.rows.resize(times.size());
    if (cfg.trajectories == 1) {
      const TrajectoryResult r = mc_trajectory(initial, plan, obs, trajectory_seed(cfg.seed, 0));
      for (std::size_t k = 0; k < times.size(); ++k) series.rows[k].p = r.samples[k];
      series.max_norm_drift = r.max_norm_drift;
      series.max_leakage = r.max_leakage;
    } else {
      EnsembleOptions opt{cfg.trajectories, cfg.seed, cfg.threads, false};
      const EnsembleResult r = mc_average(initial, plan, obs, opt);
      for (std::size_t k = 0; k < times.size(); ++k) {
        series.rows[k].p = r.stats.mean_at(k);
        series.rows[k].p_stderr = r.stats.stderr_at(k);
      }
      series.max_norm_drift = r.max_norm_drift;
      series.max_leakage = r.max_leakage;
    }
    series.trajectories = cfg.trajectories;
    if (spec.echo_time) series.echo_phi = s.meso.phi(*spec.echo_time);
  }
  const DissipativeEnvelopes env(s.meso, s.cutoff, s.bath, spec.echo_time);
  series.flight_limit_phi = flight_limit_phi(s.meso.nbar);
  for (std::size_t k = 0; k < times.size(); ++k) {
    RabiSample& row = series.rows[k];
    row.phi = spec.phis[k];
    row.t = times[k];
    const EnvelopePair e = env.at(times[k]);
    row.p_upper = e.upper;
    row.p_lower = e.lower;
    row.beyond_flight_limit = row.phi > series.flight_limit_phi;
  }
  if (s.meso.weakly_mesoscopic())
    series.warnings.push_back("nbar < 5N: mesoscopic envelopes are outside their validity range");
  return series;
}

}  // namespace

double flight_limit_phi(double nbar) { return kTwoPi * 2.5 / std::sqrt(nbar); }

std::vector<double> phi_grid(const ExperimentConfig& cfg) {
  std::vector<double> phis(cfg.phi_steps + 1);
  for (int k = 0; k <= cfg.phi_steps; ++k) phis[k] = cfg.phi_max * k / cfg.phi_steps;
  return phis;
}

Setup make_setup(const ExperimentConfig& cfg, double field_mean) {
  cfg.validate();
  const SpinQuantum spin(cfg.n_atoms);
  FockCutoff cutoff = cfg.cutoff ? FockCutoff(*cfg.cutoff) : FockCutoff::for_mean(field_mean);
  cutoff.require_mean(field_mean);
  const MesoParams meso = MesoParams::make(spin, cfg.nbar, cfg.g(), cfg.c);
  return Setup{spin, cutoff, meso, cfg.bath(), cfg.g()};
}

RabiSeries run_spontaneous(const ExperimentConfig& cfg, const std::vector<double>& phis) {
  const Setup s = make_setup(cfg, cfg.nbar);
  return simulate(cfg, s, RunSpec{phis, std::nullopt, 0.0, std::sqrt(cfg.nbar)});
}

RabiSeries run_spontaneous(const ExperimentConfig& cfg) {
  return run_spontaneous(cfg, phi_grid(cfg));
}

RabiSeries run_echo(const ExperimentConfig& cfg, const std::vector<double>& phis) {
  const Setup s = make_setup(cfg, cfg.nbar);
  const double t_pi = cfg.echo_time_us();
  RabiSeries series = simulate(cfg, s, RunSpec{phis, t_pi, 0.0, std::sqrt(cfg.nbar)});
  if (!phis.empty() && t_pi >= time_of_phi(phis.back(), s.g, cfg.nbar))
    series.warnings.push_back("echo time lies beyond the sampled window; no pulse was applied");
  return series;
}

RabiSeries run_echo(const ExperimentConfig& cfg) { return run_echo(cfg, phi_grid(cfg)); }

RabiSeries run_thermalized(const ExperimentConfig& cfg, const std::vector<double>& phis) {
  require(cfg.thermal_occupation() > 0, ErrorKind::InvalidConfig,
          "key 'n_th': thermal preparation needs n_th > 0 or n0 > 0");
  ExperimentConfig c = cfg;
  c.mode = Mode::Thermal;
  const double t_p = c.prep_time_us();
  const double alpha0 = std::sqrt(c.nbar) * std::exp(0.5 * c.gamma_tp);
  const Setup s = make_setup(c, alpha0 * alpha0);
  std::optional<double> echo;
  if (c.t_pi_us) echo = *c.t_pi_us;
  return simulate(c, s, RunSpec{phis, echo, t_p, alpha0});
}

RabiSeries run_thermalized(const ExperimentConfig& cfg) {
  return run_thermalized(cfg, phi_grid(cfg));
}

RabiSeries run_envelopes(const ExperimentConfig& cfg) {
  const Setup s = make_setup(cfg, cfg.nbar);
  const std::vector<double> phis = phi_grid(cfg);
  const DissipativeEnvelopes env(s.meso, s.cutoff, s.bath);
  RabiSeries series;
  series.flight_limit_phi = flight_limit_phi(cfg.nbar);
  const int n = s.spin.atoms();
  for (double phi : phis) {
    const double t = time_of_phi(phi, s.g, cfg.nbar);
    std::vector<cplx> f(n);
    for (int q = 1; q <= n; ++q) f[q - 1] = decoherence_free(q, t, s.meso, s.bath).value();
    RabiSample row;
    row.phi = phi;
    row.t = t;
    row.p = mesoscopic_rabi(s.spin.top(), s.spin.top(), t, s.meso, s.cutoff, f);
    const EnvelopePair e = env.at(t);
    row.p_upper = e.upper;
    row.p_lower = e.lower;
    row.beyond_flight_limit = phi > series.flight_limit_phi;
    series.rows.push_back(row);
  }
  if (s.meso.weakly_mesoscopic())
    series.warnings.push_back("nbar < 5N: mesoscopic envelopes are outside their validity range");
  return series;
}

RabiSeries run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Spontaneous: return run_spontaneous(cfg);
    case Mode::Echo: return run_echo(cfg);
    case Mode::Thermal: return run_thermalized(cfg);
    case Mode::Envelopes: return run_envelopes(cfg);
    default: break;
  }
  fail(ErrorKind::InvalidConfig, std::string("mode '") + to_string(cfg.mode) +
                                     "' does not produce a series");
}

double window_contrast(const RabiSeries& series, double lo, double hi) {
  double mx = -1e300, mn = 1e300;
  for (const RabiSample& r : series.rows) {
    if (r.phi < lo || r.phi > hi) continue;
    mx = std::max(mx, r.p);
    mn = std::min(mn, r.p);
  }
  require(mx >= mn, ErrorKind::Precondition, "no samples inside the contrast window");
  return mx - mn;
}

double envelope_contrast(const RabiSeries& series, double lo, double hi) {
  const RabiSample* top = nullptr;
  const RabiSample* bottom = nullptr;
  for (const RabiSample& r : series.rows) {
    if (r.phi < lo || r.phi > hi) continue;
    if (top == nullptr || r.p > top->p) top = &r;
    if (bottom == nullptr || r.p < bottom->p) bottom = &r;
  }
  require(top != nullptr, ErrorKind::Precondition, "no samples inside the contrast window");
  return top->p_upper - bottom->p_lower;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

namespace {

ValidationCheck check_conservation(const ExperimentConfig& cfg) {
  double norm_drift = 0, exc_drift = 0;
  for (int n = 1; n <= 3; ++n) {
    const SpinQuantum spin(n);
    const FockCutoff cutoff = FockCutoff::for_mean(cfg.nbar);
    const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.top()),
                                          coherent_field_state(std::sqrt(cfg.nbar), cutoff));
    const double g = cfg.g();
    const CavityGenerator gen(spin, cutoff, g, 0, 0);
    Evolution evo(gen, init.amplitudes(), 0.0, max_stable_step(gen, cfg.courant));
    const double e0 = init.excitation();
    std::vector<double> times;
    for (int k = 1; k <= 64; ++k) times.push_back(time_of_phi(kTwoPi * k / 64, g, cfg.nbar));
    run_sampled(evo, times, std::nullopt, nullptr,
                [&](std::size_t, const Eigen::VectorXcd& psi, double drift) {
                  norm_drift = std::max(norm_drift, drift);
                  exc_drift = std::max(
                      exc_drift, std::abs(JointState(spin, cutoff, psi).excitation() - e0));
                });
  }
  std::ostringstream os;
  os << "norm drift " << fmt("%.2e", norm_drift) << ", excitation drift " << fmt("%.2e", exc_drift);
  return {"conservation", norm_drift < 1e-6 && exc_drift < 1e-8, os.str()};
}

double vacuum_rabi_error(double courant) {
  const SpinQuantum spin(1);
  const FockCutoff cutoff(1);
  const double g = 1.0;
  const TCParams params{g, spin, cutoff};
  const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.top()),
                                        fock_state(0, cutoff));
  std::vector<double> times;
  for (int k = 1; k <= 100; ++k) times.push_back(0.2 * k);
  const RabiSeries s =
      exact_rabi_series(init, params, IntegratorConfig::for_params(params, courant), times, 1.0);
  double err = 0;
  for (const RabiSample& r : s.rows) {
    const double c = std::cos(0.5 * g * r.t);
    err = std::max(err, std::abs(r.p - c * c));
  }
  return err;
}

ValidationCheck check_vacuum_rabi(const ExperimentConfig& cfg) {
  const double err = vacuum_rabi_error(cfg.courant);
  return {"vacuum_rabi", err < 1e-6, "max error " + fmt("%.2e", err)};
}

ValidationCheck check_order(const ExperimentConfig& cfg) {
  const SpinQuantum spin(1);
  const FockCutoff cutoff = FockCutoff::for_mean(cfg.nbar);
  const double g = cfg.g();
  const TCParams params{g, spin, cutoff};
  const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.top()),
                                        coherent_field_state(std::sqrt(cfg.nbar), cutoff));
  std::vector<double> times;
  for (int k = 1; k <= 40; ++k) times.push_back(time_of_phi(0.05 * k, g, cfg.nbar));
  auto run = [&](double courant) {
    return exact_rabi_series(init, params, IntegratorConfig::for_params(params, courant), times,
                             cfg.nbar);
  };
  const RabiSeries a = run(cfg.courant), b = run(0.5 * cfg.courant), ref = run(cfg.courant / 8);
  double ea = 0, eb = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    ea = std::max(ea, std::abs(a.rows[k].p - ref.rows[k].p));
    eb = std::max(eb, std::abs(b.rows[k].p - ref.rows[k].p));
  }
  const double ratio = ea / std::max(eb, 1e-300);
  std::ostringstream os;
  os << "error " << fmt("%.2e", ea) << ", halving ratio " << fmt("%.2f", ratio);
  return {"integrator_order", ea < 1e-9 && ratio > 11 && ratio < 22, os.str()};
}

ValidationCheck check_echo(const ExperimentConfig& cfg) {
  double err = 0;
  for (int n = 1; n <= 3; ++n) {
    const SpinQuantum spin(n);
    const FockCutoff cutoff = FockCutoff::for_mean(cfg.nbar);
    const TCParams params{cfg.g(), spin, cutoff};
    const IntegratorConfig integ = IntegratorConfig::for_params(params, cfg.courant);
    const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.top()),
                                          coherent_field_state(std::sqrt(cfg.nbar), cutoff));
    const double t_pi = time_of_phi(0.8, cfg.g(), cfg.nbar);
    const JointState back = evolve(apply_echo(evolve(init, params, integ, t_pi)), params, integ, t_pi);
    const auto p0 = populations(init), p1 = populations(back);
    for (std::size_t i = 0; i < p0.size(); ++i) err = std::max(err, std::abs(p0[i] - p1[i]));
  }
  return {"echo_refocus", err < 1e-6, "max population error " + fmt("%.2e", err)};
}

ValidationCheck check_master(const ExperimentConfig& cfg) {
  const SpinQuantum spin(1);
  const FockCutoff cutoff(30);
  const double nbar = 6, g = 1.0;
  const BathParams bath{g / 308.0, 0.0};
  const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.top()),
                                        coherent_field_state(std::sqrt(nbar), cutoff));
  std::vector<double> times;
  for (int k = 1; k <= 25; ++k) times.push_back(time_of_phi(kTwoPi * k / 25, g, nbar));
  const MasterEquation eq = cavity_master_equation(spin, cutoff, g, bath);
  std::vector<double> ref(times.size());
  Eigen::MatrixXcd rho = pure_density(init.amplitudes());
  const int L = cutoff.levels();
  eq.solve(rho, times, 0.01, [&](std::size_t k, const Eigen::MatrixXcd& r) {
    ref[k] = r.diagonal().segment(L, L).real().sum();
  });
  const TrajectoryPlan plan{CavityModel{spin, cutoff, g, bath}, times, std::nullopt, 0, 0,
                            cfg.courant};
  const long m = std::max(200L, cfg.trajectories);
  const EnsembleResult r =
      mc_average(init, plan, top_population_observable(), {m, cfg.seed, cfg.threads, false});
  int inside = 0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (std::abs(r.stats.mean_at(k) - ref[k]) < 3 * r.stats.stderr_at(k)) ++inside;
  std::ostringstream os;
  os << inside << "/" << times.size() << " samples within 3 stderr (M=" << m << ")";
  return {"mc_vs_master", inside >= int(0.9 * times.size()), os.str()};
}

struct FieldRun {
  EnsembleStats stats;
  double expected_mean;
  cplx expected_phase;
};

FieldRun field_only(const ExperimentConfig& cfg, const Observable& obs, double theta) {
  const SpinQuantum spin(1);
  const double nbar = 10, gamma = 1.0, t = 0.1;
  const FockCutoff cutoff = FockCutoff::for_mean(nbar);
  const JointState init = product_state(spin, cutoff, dicke_state(spin, spin.bottom()),
                                        coherent_field_state(std::sqrt(nbar), cutoff));
  const TrajectoryPlan plan{CavityModel{spin, cutoff, 0.0, BathParams{gamma, 0}}, {t},
                            std::nullopt, 0, 0, cfg.courant};
  const long m = std::max(200L, cfg.trajectories);
  const EnsembleResult r = mc_average(init, plan, obs, {m, cfg.seed, cfg.threads, false});
  return {r.stats, nbar * -std::expm1(-gamma * t), cat_decoherence(theta, t, nbar, gamma)};
}

ValidationCheck check_poisson(const ExperimentConfig& cfg) {
  const FieldRun f = field_only(cfg, jump_count_observable(), 0);
  const double mean = f.stats.mean_at(0, 0), se = f.stats.stderr_at(0, 0);
  std::ostringstream os;
  os << "mean jumps " << fmt("%.4f", mean) << " +- " << fmt("%.4f", se) << " vs "
     << fmt("%.4f", f.expected_mean);
  return {"poisson_jumps", std::abs(mean - f.expected_mean) < 3 * se, os.str()};
}

ValidationCheck check_cat(const ExperimentConfig& cfg) {
  const double theta = 0.5 * std::numbers::pi;
  const FieldRun f = field_only(cfg, jump_phase_observable(theta), theta);
  const double re = f.stats.mean_at(0, 0), im = f.stats.mean_at(0, 1);
  const bool ok = std::abs(re - f.expected_phase.real()) < 3 * f.stats.stderr_at(0, 0) &&
                  std::abs(im - f.expected_phase.imag()) < 3 * f.stats.stderr_at(0, 1);
  std::ostringstream os;
  os << "MC " << fmt("%.4f", re) << fmt("%+.4fi", im) << " vs " << fmt("%.4f", f.expected_phase.real())
     << fmt("%+.4fi", f.expected_phase.imag());
  return {"cat_decoherence", ok, os.str()};
}

ValidationCheck check_c_independence(const ExperimentConfig& cfg) {
  const SpinQuantum spin(cfg.n_atoms);
  const FockCutoff cutoff = FockCutoff::for_mean(cfg.nbar);
  bool same = true;
  std::vector<EnvelopeModel> models;
  for (double c : {0.0, 1.0, double(cfg.n_atoms + 1)})
    models.emplace_back(MesoParams::make(spin, cfg.nbar, cfg.g(), c), cutoff);
  for (int k = 0; k <= 200; ++k) {
    const double t = time_of_phi(kTwoPi * k / 200, cfg.g(), cfg.nbar);
    const EnvelopePair a = models[0].at(t);
    for (std::size_t j = 1; j < models.size(); ++j) {
      const EnvelopePair b = models[j].at(t);
      same = same && a.upper == b.upper && a.lower == b.lower;
    }
  }
  return {"c_independence", same, same ? "identical for c in {0, 1, N+1}" : "envelopes differ"};
}

}  // namespace

ValidationReport validate(const ExperimentConfig& cfg) {
  cfg.validate();
  ValidationReport report;
  report.checks.push_back(check_conservation(cfg));
  report.checks.push_back(check_vacuum_rabi(cfg));
  report.checks.push_back(check_order(cfg));
  report.checks.push_back(check_echo(cfg));
  report.checks.push_back(check_master(cfg));
  report.checks.push_back(check_poisson(cfg));
  report.checks.push_back(check_cat(cfg));
  report.checks.push_back(check_c_independence(cfg));
  return report;
}

}  // namespace cavitas
