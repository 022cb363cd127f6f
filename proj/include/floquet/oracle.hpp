// Copyright 2026 The floquet-ising Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force references for tests. Nothing here is used by the engine, and
// nothing here calls the engine's operator assembly, propagators or drive
// path; only the plain data types are shared.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "floquet/core.hpp"
#include "floquet/models.hpp"
#include "floquet/pauli.hpp"

namespace floquet::oracle {

struct OracleConfig {
  double step_fraction = 1e-4;  ///< time step as a fraction of the drive period

  void validate() const {
    if (!(step_fraction > 0.0 && step_fraction <= 1e-2)) {
      throw std::invalid_argument("OracleConfig: step fraction must lie in (0, 1e-2]");
    }
  }
  int steps() const { return static_cast<int>(std::ceil(1.0 / step_fraction)); }
};

inline Eigen::Matrix2cd pauli_matrix(char letter) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("oracle::pauli_matrix: bad letter");
  }
  return m;
}

/// Site 0 is the least significant bit, so it is the rightmost Kronecker factor.
inline DenseOperator kron_sites(const std::vector<Eigen::Matrix2cd>& per_site) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (const auto& m : per_site) out = Eigen::kroneckerProduct(DenseOperator(m), out).eval();
  return out;
}

inline DenseOperator dense_hamiltonian_naive(const OperatorSum& op) {
  const int n = op.num_sites();
  if (n > 8) throw DimensionError("oracle::dense_hamiltonian_naive: L > 8");
  const auto dim = static_cast<Eigen::Index>(1) << n;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (const auto& term : op.terms()) {
    const std::string letters = term.string.str();
    std::vector<Eigen::Matrix2cd> factors;
    for (char c : letters) factors.push_back(pauli_matrix(c));
    h += term.coefficient * kron_sites(factors);
  }
  return h;
}

/// exp(-i t A) by Pade approximation with scaling and squaring.
inline DenseOperator exp_scaling_squaring(const DenseOperator& a, double t) {
  if (a.rows() > 64 || a.cols() > 64) throw DimensionError("oracle::exp_scaling_squaring: dimension > 64");
  const DenseOperator scaled = Complex(0.0, -t) * a;
  return scaled.exp();
}

/// Single-spin Heisenberg-picture Z: U0^dag(t) Z U0(t), U0(t) = exp(-i t (Omega/2) n.S).
inline Eigen::Matrix2cd rotated_z(const DriveField& drive, double t) {
  const auto f = drive.components();
  const Eigen::Matrix2cd h0 = 0.5 * (f[0] * pauli_matrix('X') + f[1] * pauli_matrix('Y') + f[2] * pauli_matrix('Z'));
  const Eigen::Matrix2cd u0 = (Complex(0.0, -t) * h0).exp();
  return u0.adjoint() * pauli_matrix('Z') * u0;
}

/// H_I(t) = sum_{i>j} J_ij Z_I,i(t) Z_I,j(t) assembled from Kronecker products.
inline DenseOperator interaction_hamiltonian_naive(const SystemSpec& spec, const DriveField& drive, double t) {
  const int n = spec.num_sites;
  const Eigen::Matrix2cd zt = rotated_z(drive, t);
  const auto dim = static_cast<Eigen::Index>(1) << n;
  DenseOperator h = DenseOperator::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (spec.couplings(i, j) == 0.0) continue;
      std::vector<Eigen::Matrix2cd> factors(static_cast<std::size_t>(n), pauli_matrix('I'));
      factors[static_cast<std::size_t>(i)] = zt;
      factors[static_cast<std::size_t>(j)] = zt;
      h += spec.couplings(i, j) * kron_sites(factors);
    }
  }
  return h;
}

/// Time-ordered exp(-i int_0^T H_I dt) as a midpoint product of short-time
/// exponentials, later times multiplied on the left. Second order in the step.
inline DenseOperator time_ordered_propagator(const SystemSpec& spec, const DriveField& drive, int steps) {
  if (spec.num_sites > 6) throw DimensionError("oracle::time_ordered_propagator: L > 6");
  if (steps < 1000) throw std::invalid_argument("oracle::time_ordered_propagator: need at least 1000 steps");
  const double period = 2.0 * kPi / drive.omega;
  const double dt = period / steps;
  const auto dim = static_cast<Eigen::Index>(1) << spec.num_sites;
  DenseOperator u = DenseOperator::Identity(dim, dim);
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * dt;
    u = exp_scaling_squaring(interaction_hamiltonian_naive(spec, drive, t), dt) * u;
  }
  return u;
}

inline DenseOperator time_ordered_propagator(const SystemSpec& spec, const DriveField& drive,
                                             const OracleConfig& config = {}) {
  config.validate();
  return time_ordered_propagator(spec, drive, config.steps());
}

}  // namespace floquet::oracle
