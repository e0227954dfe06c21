// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/exact_dynamics.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace cavitas {

void TCParams::validate() const {
  require(g > 0 && std::isfinite(g), ErrorKind::InvalidConfig,
          "coupling g must be positive and finite");
}

IntegratorConfig IntegratorConfig::for_params(const TCParams& params, double courant) {
  params.validate();
  const CavityGenerator gen(params.spin, params.cutoff, params.g, 0, 0);
  return IntegratorConfig{max_stable_step(gen, courant)};
}

void IntegratorConfig::validate(const TCParams& params) const {
  params.validate();
  check_step(CavityGenerator(params.spin, params.cutoff, params.g, 0, 0), dt);
}

double phi_of_time(double t, double g, double nbar) { return g * t / (2.0 * std::sqrt(nbar)); }
double time_of_phi(double phi, double g, double nbar) { return 2.0 * std::sqrt(nbar) * phi / g; }

namespace {

void require_match(const JointState& state, const TCParams& params) {
  require(state.spin() == params.spin && state.cutoff() == params.cutoff,
          ErrorKind::InvalidConfig, "state dimensions do not match the Hamiltonian");
}

void check_drift(double drift) {
  if (drift > kMaxNormDrift) {
    std::ostringstream os;
    os << "norm drift " << drift << " exceeds " << kMaxNormDrift << "; reduce the time step";
    fail(ErrorKind::Numerical, os.str());
  }
}

}  // namespace

JointState apply_hamiltonian(const JointState& state, const TCParams& params) {
  require_match(state, params);
  const CavityGenerator gen(params.spin, params.cutoff, params.g, 0, 0);
  JointState out(state.spin(), state.cutoff());
  gen.hamiltonian(state.amplitudes().data(), out.amplitudes().data());
  return out;
}

JointState evolve(const JointState& state, const TCParams& params,
                  const IntegratorConfig& integ, double t, EvolveReport* report) {
  require_match(state, params);
  require(t >= 0, ErrorKind::Precondition, "evolution time must be non-negative");
  integ.validate(params);
  const CavityGenerator gen(params.spin, params.cutoff, params.g, 0, 0);
  Evolution evo(gen, state.amplitudes(), 0.0, integ.dt);
  evo.advance_to(t);
  JointState out(state.spin(), state.cutoff(), evo.state());
  const double drift = std::abs(out.norm_squared() - state.norm_squared());
  check_drift(drift);
  if (report != nullptr) {
    report->norm_drift = drift;
    report->leakage = truncation_leakage(out, false);
  }
  return out;
}

void apply_echo(const SpinQuantum& spin, const FockCutoff& cutoff, Eigen::VectorXcd& psi) {
  const int L = cutoff.levels();
  const int N = spin.atoms();
  // J − m = N − index
  for (int i = 0; i < spin.dimension(); ++i)
    if ((N - i) % 2 != 0) psi.segment(Eigen::Index(i) * L, L) *= -1.0;
}

JointState apply_echo(JointState state) {
  apply_echo(state.spin(), state.cutoff(), state.amplitudes());
  return state;
}

RabiSeries exact_rabi_series(const JointState& initial, const TCParams& params,
                             const IntegratorConfig& integ, const std::vector<double>& times,
                             double nbar, std::optional<double> echo_time) {
  require_match(initial, params);
  require(nbar > 0, ErrorKind::InvalidConfig, "nbar must be positive");
  integ.validate(params);
  const CavityGenerator gen(params.spin, params.cutoff, params.g, 0, 0);
  Evolution evo(gen, initial.amplitudes(), 0.0, integ.dt);
  RabiSeries series;
  series.rows.resize(times.size());
  if (echo_time) series.echo_phi = phi_of_time(*echo_time, params.g, nbar);
  const int top = params.spin.index(params.spin.top());
  const int L = params.cutoff.levels();
  auto echo = [&](Eigen::VectorXcd& psi) { apply_echo(params.spin, params.cutoff, psi); };
  run_sampled(evo, times, echo_time, echo,
              [&](std::size_t k, const Eigen::VectorXcd& psi, double drift) {
                check_drift(drift);
                const JointState view(params.spin, params.cutoff, psi);
                const double leak = truncation_leakage(view, false);
                if (leak > kMaxLeakage) {
                  std::ostringstream os;
                  os << "truncation leakage " << leak << " at t=" << times[k]
                     << "; raise the Fock cutoff above " << params.cutoff.nmax();
                  fail(ErrorKind::Truncation, os.str());
                }
                series.max_norm_drift = std::max(series.max_norm_drift, drift);
                series.max_leakage = std::max(series.max_leakage, leak);
                RabiSample& row = series.rows[k];
                row.t = times[k];
                row.phi = phi_of_time(times[k], params.g, nbar);
                row.p = psi.segment(Eigen::Index(top) * L, L).squaredNorm();
              });
  series.trajectories = 1;
  return series;
}

}  // namespace cavitas
