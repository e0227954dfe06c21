// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file su2.hpp
 * @brief Collective spin of N two-level atoms in the symmetric (Dicke) subspace.
 *
 * Projections are carried as the integer 2m. The Dicke index of |J,m⟩ is
 * J+m, the number of excited atoms, so index 0 is the ground state.
 */

#pragma once

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <vector>

namespace cavitas {

using cplx = std::complex<double>;

/// Spin projection m stored as 2m.
struct Projection {
  int twice = 0;

  constexpr double value() const { return 0.5 * twice; }
  constexpr auto operator<=>(const Projection&) const = default;
};

/// Largest atom count for which the rotation sum stays accurate to ~1e-10.
inline constexpr int kMaxRotationAtoms = 30;

class SpinQuantum {
 public:
  explicit SpinQuantum(int n_atoms);

  int atoms() const { return n_; }
  double j() const { return 0.5 * n_; }
  int dimension() const { return n_ + 1; }

  bool contains(Projection m) const;
  int index(Projection m) const;
  Projection projection(int index) const;
  Projection top() const { return {n_}; }
  Projection bottom() const { return {-n_}; }
  std::vector<Projection> projections() const;

  // √(J(J+1) − m(m±1)), zero at the edges.
  double raising(Projection m) const;
  double lowering(Projection m) const;

  bool operator==(const SpinQuantum&) const = default;

 private:
  int n_;
};

struct CollectiveOperators {
  Eigen::MatrixXd jz;
  Eigen::MatrixXd jplus;
  Eigen::MatrixXd jminus;
};

/// Dense matrices in the Dicke index ordering.
CollectiveOperators collective_operators(const SpinQuantum& spin);

/**
 * Matrix elements R_{m,m'} = ⟨J,m'| exp(iπJʸ/2) |J,m⟩.
 *
 * R is real orthogonal. Its inverse is the transpose, so the rotated basis
 * state exp(−iπJʸ/2)|J,m⟩ has component R_{m',m} on |J,m'⟩.
 */
class RotationMatrix {
 public:
  RotationMatrix(SpinQuantum spin, Eigen::MatrixXd entries);

  const SpinQuantum& spin() const { return spin_; }
  double operator()(Projection m, Projection mp) const;
  double inverse(Projection m, Projection mp) const { return (*this)(mp, m); }
  /// entries()(index(m), index(m')) = R_{m,m'}.
  const Eigen::MatrixXd& entries() const { return r_; }

 private:
  SpinQuantum spin_;
  Eigen::MatrixXd r_;
};

RotationMatrix rotation_matrix(const SpinQuantum& spin);

}  // namespace cavitas
