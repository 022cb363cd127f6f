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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace floquet {

using Complex = std::complex<double>;

/// Amplitudes over the computational basis. Bit b of the index is the
/// Z-eigenvalue of site b, with bit value 0 meaning Z = +1.
using StateVector = Eigen::VectorXcd;

/// Dense 2^L x 2^L operator in the same basis as StateVector.
using DenseOperator = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Largest chain length for which dense 2^L x 2^L work is allowed by default.
inline constexpr int kDefaultDenseCap = 12;

/// Hard ceiling for any state vector (2^30 amplitudes is 16 GiB already).
inline constexpr int kMaxSites = 30;

/// Raised when operand sizes disagree or a dense path is requested above its cap.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative method fails to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::size_t hilbert_dim(int num_sites) {
  return std::size_t{1} << num_sites;
}

inline int sites_from_dim(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int sites = 0;
  while ((Eigen::Index{1} << sites) < dim) ++sites;
  return sites;
}

inline void require_dense_cap(int num_sites, int dense_cap, const char* what) {
  if (num_sites > dense_cap) {
    throw DimensionError(std::string(what) + ": L=" + std::to_string(num_sites) +
                         " exceeds the dense cap of " + std::to_string(dense_cap));
  }
}

/// |b_0 b_1 ... b_{L-1}> with site b in bit b of `index`.
inline StateVector basis_state(int num_sites, std::uint64_t index) {
  if (num_sites < 1 || num_sites > kMaxSites) {
    throw DimensionError("basis_state: L out of range");
  }
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(hilbert_dim(num_sites)));
  if (index >= hilbert_dim(num_sites)) {
    throw DimensionError("basis_state: index out of range");
  }
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

}  // namespace floquet
