// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file master.hpp
 * @brief Reference Lindblad solver for small truncated spaces.
 *
 * dρ/dt = −i[H,ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}), fixed-step RK4 on dense ρ.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <vector>

#include "core/dissipation.hpp"
#include "core/hilbert.hpp"

namespace cavitas {

using SparseOp = Eigen::SparseMatrix<cplx>;

/// Largest Hilbert dimension the reference solver accepts by default.
inline constexpr int kMasterDimensionLimit = 200;

struct DensityCheck {
  double trace_error = 0;
  double hermiticity_error = 0;
  double min_eigenvalue = 0;
};

DensityCheck check_density(const Eigen::MatrixXcd& rho);

class MasterEquation {
 public:
  MasterEquation(SparseOp hamiltonian, std::vector<SparseOp> jumps,
                 int dimension_limit = kMasterDimensionLimit);

  Eigen::Index dimension() const { return h_.rows(); }
  Eigen::MatrixXcd derivative(const Eigen::MatrixXcd& rho) const;
  void step(Eigen::MatrixXcd& rho, double dt) const;

  /// Evolves to each sample time, checking trace and positivity there.
  void solve(Eigen::MatrixXcd& rho, const std::vector<double>& times, double dt,
             const std::function<void(std::size_t, const Eigen::MatrixXcd&)>& on_sample) const;

 private:
  SparseOp h_;
  SparseOp drift_;  // −iH − ½ Σ L†L
  std::vector<SparseOp> jumps_;
};

/// Tavis-Cummings coupling plus thermal cavity damping on Dicke⊗Fock.
MasterEquation cavity_master_equation(const SpinQuantum& spin, const FockCutoff& cutoff,
                                      double g, const BathParams& bath,
                                      int dimension_limit = kMasterDimensionLimit);

/// Damped field alone, H = 0.
MasterEquation field_master_equation(const FockCutoff& cutoff, const BathParams& bath,
                                     int dimension_limit = kMasterDimensionLimit);

/// Step of size at most dt_max reaching t; convenience wrapper over MasterEquation.
Eigen::MatrixXcd master_solve(const MasterEquation& eq, Eigen::MatrixXcd rho, double t,
                              double dt_max);

Eigen::MatrixXcd pure_density(const Eigen::VectorXcd& psi);

}  // namespace cavitas
