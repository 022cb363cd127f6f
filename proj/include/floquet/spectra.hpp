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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "floquet/core.hpp"
#include "floquet/pauli.hpp"

namespace floquet {

/// Eigenvalues ascending; column k of `eigenvectors` belongs to eigenvalue k.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  DenseOperator eigenvectors;

  Eigen::Index size() const { return eigenvalues.size(); }
  bool has_vectors() const { return eigenvectors.cols() == eigenvalues.size() && eigenvectors.size() > 0; }
};

namespace detail {

/// Reproducible pseudo-random state. Built from raw mt19937_64 words so the
/// result does not depend on the standard library's distribution code.
inline StateVector seeded_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
  StateVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double re = uniform();
    const double im = uniform();
    v(k) = Complex(re, im);
  }
  v.normalize();
  return v;
}

/// Hermitian eigensolver; uses the real solver when the matrix has no
/// imaginary part, which is the common case for drives with phi = 0.
inline EigenSystem hermitian_eigensystem(const DenseOperator& h, bool with_vectors) {
  const int options = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  EigenSystem es;
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real(), options);
    if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_eigensystem: real solver failed");
    es.eigenvalues = solver.eigenvalues();
    if (with_vectors) es.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<DenseOperator> solver(h, options);
    if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_eigensystem: complex solver failed");
    es.eigenvalues = solver.eigenvalues();
    if (with_vectors) es.eigenvectors = solver.eigenvectors();
  }
  return es;
}

}  // namespace detail

inline EigenSystem full_diagonalize(const OperatorSum& h, int dense_cap = kDefaultDenseCap, bool with_vectors = true) {
  require_dense_cap(h.num_sites(), dense_cap, "full_diagonalize");
  return detail::hermitian_eigensystem(materialize(h, dense_cap), with_vectors);
}

struct LanczosOptions {
  int basis_size = 80;      ///< vectors kept per restart cycle
  int max_restarts = 400;
  std::uint64_t seed = 20220901;
  bool check_degeneracy = true;
  double degeneracy_tol = 1e-7;  ///< relative gap below which the ground space counts as degenerate
};

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
  int matvecs = 0;
  bool degenerate = false;
  /// First excitation gap, NaN when not computed.
  double gap = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct LanczosSolve {
  double energy;
  StateVector state;
  double residual;
  int matvecs;
};

/// Explicitly restarted Lanczos with full reorthogonalization. Every vector
/// in the basis is kept orthogonal to `deflate` as well.
inline LanczosSolve lanczos_lowest(const MatrixFreeOperator& h, StateVector start, double tol,
                                   const LanczosOptions& opt, const std::vector<StateVector>& deflate) {
  const Eigen::Index dim = h.dim();
  const Eigen::Index max_basis = std::min<Eigen::Index>(opt.basis_size, dim - static_cast<Eigen::Index>(deflate.size()));
  if (max_basis < 1) throw DimensionError("lanczos: nothing left after deflation");

  auto project_out = [&](StateVector& w, const std::vector<StateVector>& against, Eigen::Index count) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < count; ++k) w -= against[static_cast<std::size_t>(k)].dot(w) * against[static_cast<std::size_t>(k)];
      for (const auto& d : deflate) w -= d.dot(w) * d;
    }
  };

  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(max_basis));
  int matvecs = 0;
  project_out(start, basis, 0);
  if (start.norm() < 1e-12) throw ConvergenceError("lanczos: start vector lies in the deflated space");
  start.normalize();

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    basis.clear();
    basis.push_back(start);
    std::vector<double> alpha;
    std::vector<double> beta;
    StateVector w;
    for (Eigen::Index k = 0; k < max_basis; ++k) {
      h.apply(basis.back(), w);
      ++matvecs;
      alpha.push_back(basis.back().dot(w).real());
      project_out(w, basis, static_cast<Eigen::Index>(basis.size()));
      const double b = w.norm();
      if (k + 1 == max_basis || b < 1e-13) break;
      beta.push_back(b);
      basis.push_back(w / b);
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      t(k, k) = alpha[static_cast<std::size_t>(k)];
      if (k + 1 < m) t(k, k + 1) = t(k + 1, k) = beta[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
    const Eigen::VectorXd s = small.eigenvectors().col(0);
    StateVector ritz = StateVector::Zero(dim);
    for (Eigen::Index k = 0; k < m; ++k) ritz += s(k) * basis[static_cast<std::size_t>(k)];
    project_out(ritz, {}, 0);
    ritz.normalize();

    h.apply(ritz, w);
    ++matvecs;
    const double energy = ritz.dot(w).real();
    const double residual = (w - energy * ritz).norm();
    if (residual <= tol) return {energy, ritz, residual, matvecs};
    start = ritz;
  }
  throw ConvergenceError("lanczos: residual above " + std::to_string(tol) + " after " +
                         std::to_string(opt.max_restarts) + " restarts");
}

}  // namespace detail

/// Lowest eigenpair by matrix-free Lanczos from a fixed-seed start vector, so
/// reruns are bit-identical. With `check_degeneracy` a second, deflated solve
/// estimates the gap; an exactly degenerate ground space is flagged and the
/// returned representative is the one the fixed start vector selects.
inline GroundState ground_state(const OperatorSum& h, double tol = 1e-9, const LanczosOptions& opt = {}) {
  if (!(tol > 0.0)) throw std::invalid_argument("ground_state: tol must be > 0");
  const MatrixFreeOperator op(h);
  const Eigen::Index dim = op.dim();
  GroundState gs;
  if (dim == 1) {
    StateVector v = StateVector::Ones(1);
    gs.energy = expectation(h, v);
    gs.state = v;
    return gs;
  }
  auto first = detail::lanczos_lowest(op, detail::seeded_state(dim, opt.seed), tol, opt, {});
  gs.energy = first.energy;
  gs.state = std::move(first.state);
  gs.residual = first.residual;
  gs.matvecs = first.matvecs;
  if (opt.check_degeneracy) {
    auto second = detail::lanczos_lowest(op, detail::seeded_state(dim, opt.seed + 1), std::max(tol, 1e-8), opt, {gs.state});
    gs.matvecs += second.matvecs;
    gs.gap = second.energy - gs.energy;
    gs.degenerate = gs.gap < opt.degeneracy_tol * std::max(1.0, std::abs(gs.energy));
  }
  return gs;
}

struct SpectralNormOptions {
  Eigen::Index dense_limit = 1024;  ///< dense SVD up to this dimension, power iteration above
  double tol = 1e-10;
  int max_iterations = 200000;
  std::uint64_t seed = 7;
};

namespace detail {

/// Largest singular value by power iteration on A^dag A, stopped on the
/// relative residual of the Rayleigh quotient.
inline double spectral_norm_power(const DenseOperator& a, const SpectralNormOptions& opt) {
  StateVector x = seeded_state(a.cols(), opt.seed);
  double mu = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const StateVector ax = a * x;
    const StateVector y = a.adjoint() * ax;
    mu = x.dot(y).real();
    if (mu == 0.0) {
      if (it > 0) return 0.0;
      x = seeded_state(a.cols(), opt.seed + 1);
      continue;
    }
    const double residual = (y - mu * x).norm();
    if (residual <= opt.tol * mu) return std::sqrt(mu);
    x = y / y.norm();
  }
  throw ConvergenceError("spectral_norm: power iteration did not converge");
}

}  // namespace detail

/// Largest singular value.
inline double spectral_norm(const DenseOperator& a, const SpectralNormOptions& opt = {}) {
  if (a.size() == 0) return 0.0;
  if (!a.allFinite()) throw std::invalid_argument("spectral_norm: non-finite entries");
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= opt.dense_limit) {
    Eigen::BDCSVD<DenseOperator> svd(a);
    return svd.singularValues()(0);
  }
  return detail::spectral_norm_power(a, opt);
}

}  // namespace floquet
