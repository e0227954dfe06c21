// Copyright 2026 The Cavitas Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/su2.hpp"

#include <cfloat>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace cavitas {

SpinQuantum::SpinQuantum(int n_atoms) : n_(n_atoms) {
  require(n_atoms >= 1, ErrorKind::InvalidConfig,
          "atom count must be positive, got " + std::to_string(n_atoms));
}

bool SpinQuantum::contains(Projection m) const {
  return m.twice >= -n_ && m.twice <= n_ && ((m.twice + n_) % 2 == 0);
}

int SpinQuantum::index(Projection m) const {
  if (!contains(m)) {
    fail(ErrorKind::Range, "projection m=" + std::to_string(m.value()) +
                               " outside spin J=" + std::to_string(j()));
  }
  return (m.twice + n_) / 2;
}

Projection SpinQuantum::projection(int index) const {
  require(index >= 0 && index <= n_, ErrorKind::Range,
          "Dicke index " + std::to_string(index) + " out of range");
  return {2 * index - n_};
}

std::vector<Projection> SpinQuantum::projections() const {
  std::vector<Projection> out;
  out.reserve(dimension());
  for (int i = 0; i <= n_; ++i) out.push_back(projection(i));
  return out;
}

double SpinQuantum::raising(Projection m) const {
  // 4(J(J+1) − m(m+1)) = (N − 2m)(N + 2m + 2)
  const double v = double(n_ - m.twice) * double(n_ + m.twice + 2);
  return v > 0 ? 0.5 * std::sqrt(v) : 0.0;
}

double SpinQuantum::lowering(Projection m) const {
  const double v = double(n_ + m.twice) * double(n_ - m.twice + 2);
  return v > 0 ? 0.5 * std::sqrt(v) : 0.0;
}

CollectiveOperators collective_operators(const SpinQuantum& spin) {
  const int d = spin.dimension();
  CollectiveOperators ops{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d),
                          Eigen::MatrixXd::Zero(d, d)};
  for (int i = 0; i < d; ++i) {
    const Projection m = spin.projection(i);
    ops.jz(i, i) = m.value();
    if (i + 1 < d) ops.jplus(i + 1, i) = spin.raising(m);
    if (i > 0) ops.jminus(i - 1, i) = spin.lowering(m);
  }
  return ops;
}

RotationMatrix::RotationMatrix(SpinQuantum spin, Eigen::MatrixXd entries)
    : spin_(spin), r_(std::move(entries)) {
  require(r_.rows() == spin_.dimension() && r_.cols() == spin_.dimension(),
          ErrorKind::InvalidConfig, "rotation matrix shape does not match spin");
}

double RotationMatrix::operator()(Projection m, Projection mp) const {
  return r_(spin_.index(m), spin_.index(mp));
}

namespace {

double log_factorial(int k) { return std::lgamma(double(k) + 1.0); }

// The alternating sum cancels by ~12 digits at N=30. Factorials up to 30! are
// exact in a 113-bit mantissa, so the sum is carried in quad precision.
#if LDBL_MANT_DIG >= 113
using wide = long double;
#else
using wide = __float128;
#endif

std::vector<wide> exact_factorials(int n) {
  std::vector<wide> f(n + 1, wide(1));
  for (int k = 1; k <= n; ++k) f[k] = f[k - 1] * wide(k);
  return f;
}

}  // namespace

RotationMatrix rotation_matrix(const SpinQuantum& spin) {
  const int n = spin.atoms();
  if (n > kMaxRotationAtoms) {
    fail(ErrorKind::Range, "rotation matrices are supported up to N=" +
                               std::to_string(kMaxRotationAtoms) + " atoms, got N=" +
                               std::to_string(n));
  }
  const double j = spin.j();
  const auto fact = exact_factorials(n);
  Eigen::MatrixXd r(n + 1, n + 1);
  // Entry (x, y) holds R_{x,y}. With a = J−x and b = J−y the sum reads
  //   √(a! b! / ((N−a)! (N−b)!)) Σ_k (−1)^{b−k} (N−k)! / (2^{J−k} k! (a−k)! (b−k)!).
  for (int ix = 0; ix <= n; ++ix) {
    const int a = n - ix;
    for (int iy = 0; iy <= n; ++iy) {
      const int b = n - iy;
      const double pre = 0.5 * (log_factorial(a) + log_factorial(b) -
                                log_factorial(n - a) - log_factorial(n - b)) -
                         j * std::log(2.0);
      wide sum = 0;
      wide pow2 = 1;
      for (int k = 0; k <= std::min(a, b); ++k, pow2 *= 2) {
        const wide term = fact[n - k] * pow2 / (fact[k] * fact[a - k] * fact[b - k]);
        sum += ((b - k) % 2 == 0) ? term : -term;
      }
      r(ix, iy) = double(sum) * std::exp(pre);
    }
  }
  return RotationMatrix(spin, std::move(r));
}

}  // namespace cavitas
