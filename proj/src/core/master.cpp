// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/master.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace cavitas {

DensityCheck check_density(const Eigen::MatrixXcd& rho) {
  DensityCheck c;
  c.trace_error = std::abs(rho.trace() - cplx(1.0));
  c.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

MasterEquation::MasterEquation(SparseOp hamiltonian, std::vector<SparseOp> jumps,
                               int dimension_limit)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  const Eigen::Index d = h_.rows();
  if (d > dimension_limit) {
    std::ostringstream os;
    os << "master equation dimension " << d << " exceeds the reference limit "
       << dimension_limit << "; use the Monte Carlo ensemble instead";
    fail(ErrorKind::Precondition, os.str());
  }
  require(h_.cols() == d, ErrorKind::InvalidConfig, "Hamiltonian must be square");
  SparseOp k(d, d);
  for (const SparseOp& l : jumps_) {
    require(l.rows() == d && l.cols() == d, ErrorKind::InvalidConfig,
            "jump operator shape does not match the Hamiltonian");
    k += SparseOp(l.adjoint()) * l;
  }
  drift_ = cplx(0, -1) * h_ - 0.5 * k;
  drift_.makeCompressed();
}

Eigen::MatrixXcd MasterEquation::derivative(const Eigen::MatrixXcd& rho) const {
  // With ρ hermitian: ρ A† = (A ρ)† and L ρ L† = L (L ρ)†.
  const Eigen::MatrixXcd a = drift_ * rho;
  Eigen::MatrixXcd out = a + a.adjoint();
  for (const SparseOp& l : jumps_) {
    const Eigen::MatrixXcd lr = l * rho;
    out += l * lr.adjoint();
  }
  return out;
}

void MasterEquation::step(Eigen::MatrixXcd& rho, double dt) const {
  const Eigen::MatrixXcd k1 = derivative(rho);
  const Eigen::MatrixXcd k2 = derivative(rho + (0.5 * dt) * k1);
  const Eigen::MatrixXcd k3 = derivative(rho + (0.5 * dt) * k2);
  const Eigen::MatrixXcd k4 = derivative(rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void MasterEquation::solve(
    Eigen::MatrixXcd& rho, const std::vector<double>& times, double dt,
    const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& on_sample) const {
  require(rho.rows() == dimension() && rho.cols() == dimension(), ErrorKind::InvalidConfig,
          "density matrix shape does not match the equation");
  require(dt > 0, ErrorKind::InvalidConfig, "time step must be positive");
  const DensityCheck c0 = check_density(rho);
  require(c0.trace_error < 1e-8 && c0.hermiticity_error < 1e-10 && c0.min_eigenvalue > -1e-8,
          ErrorKind::Precondition, "initial density matrix must be a normalized state");
  double t = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double span = times[k] - t;
    require(span >= 0, ErrorKind::Precondition, "sample times must be increasing");
    if (span > 0) {
      const long n = std::max(1L, long(std::ceil(span / dt - 1e-9)));
      const double h = span / double(n);
      for (long s = 0; s < n; ++s) step(rho, h);
      t = times[k];
    }
    const DensityCheck c = check_density(rho);
    if (c.trace_error > 1e-8 || c.min_eigenvalue < -1e-8) {
      std::ostringstream os;
      os << "density matrix degraded at t=" << t << " (trace error " << c.trace_error
         << ", min eigenvalue " << c.min_eigenvalue << "); reduce the time step";
      fail(ErrorKind::Numerical, os.str());
    }
    if (on_sample) on_sample(k, rho);
  }
}

namespace {

SparseOp field_lowering(const SpinQuantum& spin, const FockCutoff& cutoff) {
  const int L = cutoff.levels();
  const int d = spin.dimension() * L;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int i = 0; i < spin.dimension(); ++i)
    for (int n = 1; n < L; ++n) trip.emplace_back(i * L + n - 1, i * L + n, std::sqrt(double(n)));
  SparseOp a(d, d);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

std::vector<SparseOp> thermal_jumps(const SparseOp& a, const BathParams& bath) {
  std::vector<SparseOp> out;
  if (bath.emit_rate() > 0) out.push_back(std::sqrt(bath.emit_rate()) * a);
  if (bath.absorb_rate() > 0) out.push_back(SparseOp(std::sqrt(bath.absorb_rate()) * a.adjoint()));
  return out;
}

}  // namespace

MasterEquation cavity_master_equation(const SpinQuantum& spin, const FockCutoff& cutoff,
                                      double g, const BathParams& bath, int dimension_limit) {
  bath.validate();
  const int L = cutoff.levels();
  const int d = spin.dimension() * L;
  require(d <= dimension_limit, ErrorKind::Precondition,
          "master equation dimension " + std::to_string(d) + " exceeds the reference limit " +
              std::to_string(dimension_limit) + "; use the Monte Carlo ensemble instead");
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int i = 1; i < spin.dimension(); ++i) {
    const double j = spin.raising(spin.projection(i - 1));
    for (int n = 0; n + 1 < L; ++n) {
      // (g/2) J⁺a: |i−1, n+1⟩ → |i, n⟩, and its adjoint
      const double v = 0.5 * g * j * std::sqrt(n + 1.0);
      trip.emplace_back(i * L + n, (i - 1) * L + n + 1, v);
      trip.emplace_back((i - 1) * L + n + 1, i * L + n, v);
    }
  }
  SparseOp h(d, d);
  h.setFromTriplets(trip.begin(), trip.end());
  return MasterEquation(std::move(h), thermal_jumps(field_lowering(spin, cutoff), bath),
                        dimension_limit);
}

MasterEquation field_master_equation(const FockCutoff& cutoff, const BathParams& bath,
                                     int dimension_limit) {
  bath.validate();
  const int L = cutoff.levels();
  std::vector<Eigen::Triplet<cplx>> trip;
  for (int n = 1; n < L; ++n) trip.emplace_back(n - 1, n, std::sqrt(double(n)));
  SparseOp a(L, L);
  a.setFromTriplets(trip.begin(), trip.end());
  return MasterEquation(SparseOp(L, L), thermal_jumps(a, bath), dimension_limit);
}

Eigen::MatrixXcd master_solve(const MasterEquation& eq, Eigen::MatrixXcd rho, double t,
                              double dt_max) {
  require(t >= 0, ErrorKind::Precondition, "time must be non-negative");
  eq.solve(rho, {t}, dt_max, nullptr);
  return rho;
}

Eigen::MatrixXcd pure_density(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

}  // namespace cavitas
