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

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "floquet/core.hpp"
#include "floquet/pauli.hpp"

namespace floquet {

enum class Boundary { open, periodic };

inline std::string_view to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

/// Drive angle at which the leading-order effective model is the isotropic
/// XXX chain (cos^2 = 1/3, sin^2/2 = 1/3).
inline const double kXxxAngle = std::atan(std::sqrt(2.0));

/// Transverse drive; the effective model is an XY chain up to a rotation.
inline constexpr double kXyAngle = kPi / 2;

/// Chain geometry and Ising couplings. Only the strict lower triangle
/// couplings(i, j), i > j, is read.
struct SystemSpec {
  int num_sites = 1;
  Boundary boundary = Boundary::open;
  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(1, 1);

  /// Uniform nearest-neighbour chain. The periodic wrap bond is only added for
  /// L > 2, where it is distinct from the bond (1, 0).
  static SystemSpec chain(int num_sites, double coupling, Boundary boundary = Boundary::open) {
    SystemSpec spec{num_sites, boundary, Eigen::MatrixXd::Zero(num_sites, num_sites)};
    spec.validate();
    for (int i = 1; i < num_sites; ++i) spec.couplings(i, i - 1) = coupling;
    if (boundary == Boundary::periodic && num_sites > 2) spec.couplings(num_sites - 1, 0) = coupling;
    return spec;
  }

  void validate() const {
    if (num_sites < 1 || num_sites > kMaxSites) {
      throw std::invalid_argument("SystemSpec: L=" + std::to_string(num_sites) + " out of range");
    }
    if (couplings.rows() != num_sites || couplings.cols() != num_sites) {
      throw DimensionError("SystemSpec: coupling matrix must be L x L");
    }
    if (!couplings.allFinite()) throw std::invalid_argument("SystemSpec: non-finite coupling");
  }

  /// Nearest-neighbour pairs (i, i+1) implied by the boundary, independent of couplings.
  std::vector<std::pair<int, int>> chain_bonds() const {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < num_sites; ++i) bonds.emplace_back(i, i + 1);
    if (boundary == Boundary::periodic && num_sites > 2) bonds.emplace_back(num_sites - 1, 0);
    return bonds;
  }
};

using Vec3 = std::array<double, 3>;

/// Constant field Omega * (sin(theta) cos(phi), sin(theta) sin(phi), cos(theta)).
struct DriveField {
  double omega = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  void validate() const {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("DriveField: omega must be >= 0");
    if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("DriveField: theta must lie in [0, pi]");
    if (!std::isfinite(phi)) throw std::invalid_argument("DriveField: phi must be finite");
  }

  Vec3 axis() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }

  Vec3 components() const {
    const Vec3 n = axis();
    return {omega * n[0], omega * n[1], omega * n[2]};
  }

  double period() const {
    if (omega <= 0.0) throw std::domain_error("DriveField::period: omega = 0 has no period");
    return 2.0 * kPi / omega;
  }
};

namespace detail {

inline constexpr std::array<Pauli, 3> kXyz = {Pauli::X, Pauli::Y, Pauli::Z};

template <typename F>
void for_each_bond(const SystemSpec& spec, F&& f) {
  for (int i = 1; i < spec.num_sites; ++i) {
    for (int j = 0; j < i; ++j) {
      const double coupling = spec.couplings(i, j);
      if (coupling != 0.0) f(i, j, coupling);
    }
  }
}

/// Adds w * (a.S)_i (b.S)_j as nine two-site Pauli terms.
inline void add_vector_product(OperatorSum& op, int i, int j, double w, const Vec3& a, const Vec3& b) {
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      const double c = w * a[static_cast<std::size_t>(p)] * b[static_cast<std::size_t>(q)];
      if (c != 0.0) op.add(c, PauliString::pair(op.num_sites(), i, kXyz[static_cast<std::size_t>(p)], j,
                                                kXyz[static_cast<std::size_t>(q)]));
    }
  }
}

inline Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double dot = axis[0] * v[0] + axis[1] * v[1] + axis[2] * v[2];
  const Vec3 cross = {axis[1] * v[2] - axis[2] * v[1], axis[2] * v[0] - axis[0] * v[2],
                      axis[0] * v[1] - axis[1] * v[0]};
  Vec3 out{};
  for (std::size_t k = 0; k < 3; ++k) out[k] = v[k] * c + cross[k] * s + axis[k] * dot * (1.0 - c);
  return out;
}

}  // namespace detail

/// sum_{i>j} J_ij Z_i Z_j + (1/2) sum_i (Omega_x X_i + Omega_y Y_i + Omega_z Z_i).
inline OperatorSum build_ising_drive(const SystemSpec& spec, const DriveField& drive) {
  spec.validate();
  drive.validate();
  const int n = spec.num_sites;
  OperatorSum h(n);
  detail::for_each_bond(spec, [&](int i, int j, double coupling) {
    h.add(coupling, PauliString::pair(n, i, Pauli::Z, j, Pauli::Z));
  });
  const Vec3 field = drive.components();
  for (int i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      if (field[a] != 0.0) h.add(0.5 * field[a], PauliString::single(n, i, detail::kXyz[a]));
    }
  }
  return h;
}

/// Leading Magnus term in the frame where the drive points along z:
/// sum_{i>j} J_ij [cos^2 Z_i Z_j + (sin^2 / 2)(X_i X_j + Y_i Y_j)].
inline OperatorSum build_effective_xxz(const SystemSpec& spec, double theta) {
  spec.validate();
  const int n = spec.num_sites;
  const double zz = std::cos(theta) * std::cos(theta);
  const double xy = 0.5 * std::sin(theta) * std::sin(theta);
  OperatorSum h(n);
  detail::for_each_bond(spec, [&](int i, int j, double coupling) {
    h.add(coupling * xy, PauliString::pair(n, i, Pauli::X, j, Pauli::X));
    h.add(coupling * xy, PauliString::pair(n, i, Pauli::Y, j, Pauli::Y));
    h.add(coupling * zz, PauliString::pair(n, i, Pauli::Z, j, Pauli::Z));
  });
  return h;
}

/// The same leading Magnus term expressed in the lab frame, i.e. with the
/// drive axis n in place of z:
/// sum J_ij [(cos^2 - sin^2/2)(n.S)_i(n.S)_j + (sin^2/2) S_i.S_j].
/// This is the target whose ground state the echo experiments prepare.
inline OperatorSum build_effective_lab_frame(const SystemSpec& spec, const DriveField& drive) {
  spec.validate();
  drive.validate();
  const int n = spec.num_sites;
  const double cos2 = std::cos(drive.theta) * std::cos(drive.theta);
  const double half_sin2 = 0.5 * std::sin(drive.theta) * std::sin(drive.theta);
  const Vec3 axis = drive.axis();
  OperatorSum h(n);
  detail::for_each_bond(spec, [&](int i, int j, double coupling) {
    detail::add_vector_product(h, i, j, coupling * (cos2 - half_sin2), axis, axis);
    for (std::size_t a = 0; a < 3; ++a) {
      h.add(coupling * half_sin2, PauliString::pair(n, i, detail::kXyz[a], j, detail::kXyz[a]));
    }
  });
  return h;
}

/// sum over chain bonds of jx X X + jy Y Y + jz Z Z. Uses the boundary of
/// `spec` but not its coupling matrix.
inline OperatorSum build_heisenberg(const SystemSpec& spec, double jx, double jy, double jz) {
  spec.validate();
  const int n = spec.num_sites;
  OperatorSum h(n);
  for (const auto& [i, j] : spec.chain_bonds()) {
    h.add(jx, PauliString::pair(n, i, Pauli::X, j, Pauli::X));
    h.add(jy, PauliString::pair(n, i, Pauli::Y, j, Pauli::Y));
    h.add(jz, PauliString::pair(n, i, Pauli::Z, j, Pauli::Z));
  }
  return h;
}

/// Unit vector e(t) with U0^dag(t) Z U0(t) = e(t).S for one spin, where
/// U0(t) = exp(-i t (Omega/2) n.S). That conjugation rotates z about the drive
/// axis by -Omega t; the path closes after one period.
inline Vec3 drive_path(const DriveField& drive, double t) {
  drive.validate();
  if (t < 0.0) throw std::invalid_argument("drive_path: t must be >= 0");
  return detail::rotate({0.0, 0.0, 1.0}, drive.axis(), -drive.omega * t);
}

/// sum_{i>j} J_ij (e(t).S)_i (e(t).S)_j, nine two-site weights per bond.
inline OperatorSum interaction_hamiltonian(const SystemSpec& spec, const DriveField& drive, double t) {
  spec.validate();
  const Vec3 e = drive_path(drive, t);
  OperatorSum h(spec.num_sites);
  detail::for_each_bond(spec, [&](int i, int j, double coupling) { detail::add_vector_product(h, i, j, coupling, e, e); });
  return h;
}

/// Product over sites of exp(+i theta Y / 2) = [[c, s], [-s, c]] with
/// c = cos(theta/2), s = sin(theta/2). It takes sin(theta) X + cos(theta) Z to Z.
class BasisChange {
 public:
  BasisChange(double theta, int num_sites) : theta_(theta), num_sites_(num_sites) {
    if (num_sites < 1 || num_sites > kMaxSites) throw DimensionError("BasisChange: L out of range");
  }

  double theta() const { return theta_; }
  int num_sites() const { return num_sites_; }

  /// U_B v, or U_B^dag v when `adjoint` is set.
  StateVector apply(const StateVector& v, bool adjoint = false) const {
    StateVector out = v;
    apply_in_place(out, adjoint);
    return out;
  }

  void apply_in_place(StateVector& v, bool adjoint = false) const {
    detail::require_state_length(num_sites_, v, "BasisChange::apply");
    const double c = std::cos(0.5 * theta_);
    const double s = adjoint ? -std::sin(0.5 * theta_) : std::sin(0.5 * theta_);
    const auto dim = static_cast<std::uint64_t>(v.size());
    for (int site = 0; site < num_sites_; ++site) {
      const std::uint64_t bit = std::uint64_t{1} << site;
      for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & bit) continue;
        const auto i0 = static_cast<Eigen::Index>(b);
        const auto i1 = static_cast<Eigen::Index>(b | bit);
        const Complex a0 = v(i0);
        const Complex a1 = v(i1);
        v(i0) = c * a0 + s * a1;
        v(i1) = -s * a0 + c * a1;
      }
    }
  }

  /// U_B A U_B^dag, column and row rotations without forming U_B.
  DenseOperator conjugate(const DenseOperator& a) const {
    DenseOperator out = a;
    for (Eigen::Index col = 0; col < out.cols(); ++col) {
      StateVector v = out.col(col);
      apply_in_place(v, false);
      out.col(col) = v;
    }
    // A' U^dag = (U A'^dag)^dag
    DenseOperator adj = out.adjoint();
    for (Eigen::Index col = 0; col < adj.cols(); ++col) {
      StateVector v = adj.col(col);
      apply_in_place(v, false);
      adj.col(col) = v;
    }
    return adj.adjoint();
  }

  DenseOperator dense(int dense_cap = kDefaultDenseCap) const {
    require_dense_cap(num_sites_, dense_cap, "BasisChange::dense");
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(num_sites_));
    DenseOperator u = DenseOperator::Identity(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      StateVector v = u.col(col);
      apply_in_place(v, false);
      u.col(col) = v;
    }
    return u;
  }

 private:
  double theta_;
  int num_sites_;
};

inline DenseOperator basis_change(double theta, int num_sites, int dense_cap = kDefaultDenseCap) {
  return BasisChange(theta, num_sites).dense(dense_cap);
}

}  // namespace floquet
