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
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "floquet/core.hpp"
#include "floquet/models.hpp"
#include "floquet/pauli.hpp"
#include "floquet/spectra.hpp"

namespace floquet {

/// exp(-i t H) = V exp(-i t Lambda) V^dag from a complete eigensystem.
inline DenseOperator evolve_dense(const EigenSystem& es, double t) {
  if (!es.has_vectors()) throw std::invalid_argument("evolve_dense: eigensystem has no eigenvectors");
  Eigen::VectorXcd phases(es.size());
  for (Eigen::Index k = 0; k < es.size(); ++k) phases(k) = std::polar(1.0, -t * es.eigenvalues(k));
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

inline DenseOperator evolve_dense(const OperatorSum& h, double t, int dense_cap = kDefaultDenseCap) {
  require_dense_cap(h.num_sites(), dense_cap, "evolve_dense");
  if (t == 0.0) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dim(h.num_sites()));
    return DenseOperator::Identity(dim, dim);
  }
  return evolve_dense(full_diagonalize(h, dense_cap), t);
}

struct KrylovOptions {
  int max_dim = 40;
  /// Bound on ||result - exact|| for one call, split over sub-steps in proportion to their length.
  double tol = 1e-10;
  int max_substeps = 100000;
};

struct PropagatorResult {
  StateVector state;
  int substeps = 0;
  int matvecs = 0;
  double error_estimate = 0.0;  ///< sum of the per-step a posteriori estimates
};

namespace detail {

/// exp(-i tau T) e_1 for the symmetric tridiagonal T held as an eigensystem.
struct SmallPropagator {
  Eigen::VectorXd lambda;
  Eigen::MatrixXd q;

  Eigen::VectorXcd first_column(double tau) const {
    Eigen::VectorXcd c(lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j) c(j) = std::polar(q(0, j), -tau * lambda(j));
    return q.cast<Complex>() * c;
  }

  double last_entry_abs(double tau) const {
    const Eigen::Index m = lambda.size() - 1;
    Complex s{0.0, 0.0};
    for (Eigen::Index j = 0; j <= m; ++j) s += q(m, j) * q(0, j) * std::polar(1.0, -tau * lambda(j));
    return std::abs(s);
  }
};

inline SmallPropagator tridiagonal_eigensystem(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
  Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index k = 0; k + 1 < m; ++k) sub(k) = beta[static_cast<std::size_t>(k)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw ConvergenceError("krylov: tridiagonal eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace detail

/// exp(-i t H) v by Lanczos-Krylov steps. Each step builds up to `max_dim`
/// basis vectors, then takes the longest sub-step whose a posteriori error
/// estimate beta_m |[exp(-i tau T_m) e_1]_m| fits its share of the tolerance.
inline PropagatorResult krylov_propagate(const MatrixFreeOperator& h, const StateVector& v, double t,
                                         const KrylovOptions& opt = {}) {
  detail::require_state_length(h.num_sites(), v, "krylov_propagate");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("krylov_propagate: tol must be > 0");
  if (opt.max_dim < 2) throw std::invalid_argument("krylov_propagate: max_dim must be >= 2");
  PropagatorResult result;
  result.state = v;
  if (t == 0.0) return result;

  const double total = std::abs(t);
  const double direction = t > 0.0 ? 1.0 : -1.0;
  const Eigen::Index max_dim = std::min<Eigen::Index>(opt.max_dim, h.dim());
  double remaining = total;
  std::vector<StateVector> basis;
  basis.reserve(static_cast<std::size_t>(max_dim));
  StateVector w;

  while (remaining > 0.0) {
    if (result.substeps >= opt.max_substeps) {
      throw ConvergenceError("krylov_propagate: exceeded " + std::to_string(opt.max_substeps) + " sub-steps");
    }
    const double scale = result.state.norm();
    if (scale == 0.0) return result;
    basis.clear();
    basis.push_back(result.state / scale);
    std::vector<double> alpha;
    std::vector<double> beta;
    double tau = 0.0;
    double estimate = 0.0;
    detail::SmallPropagator small;

    for (Eigen::Index k = 0;; ++k) {
      h.apply(basis.back(), w);
      ++result.matvecs;
      alpha.push_back(basis.back().dot(w).real());
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) w -= b.dot(w) * b;
      }
      const double next_beta = w.norm();
      const bool breakdown = next_beta <= 1e-12 * std::max(1.0, std::abs(alpha.back()));
      const bool full = k + 1 == max_dim;
      // Checking every few vectors keeps the small eigensolves cheap.
      if (breakdown || full || (k + 1) % 4 == 0) {
        small = detail::tridiagonal_eigensystem(alpha, beta);
        if (breakdown) {
          tau = remaining;
          estimate = 0.0;
          break;
        }
        auto within = [&](double step) {
          const double err = next_beta * small.last_entry_abs(direction * step);
          return std::pair{err <= opt.tol * step / total, err};
        };
        if (auto [ok, err] = within(remaining); ok) {
          tau = remaining;
          estimate = err;
          break;
        }
        if (full) {
          tau = remaining;
          for (;;) {
            tau *= 0.8;
            if (tau < 1e-14 * total) throw ConvergenceError("krylov_propagate: step size underflow");
            if (auto [ok, err] = within(tau); ok) {
              estimate = err;
              break;
            }
          }
          break;
        }
      }
      beta.push_back(next_beta);
      basis.push_back(w / next_beta);
    }

    const Eigen::VectorXcd coeff = small.first_column(direction * tau);
    StateVector next = StateVector::Zero(result.state.size());
    for (Eigen::Index k = 0; k < coeff.size(); ++k) next += coeff(k) * basis[static_cast<std::size_t>(k)];
    result.state = scale * next;
    result.error_estimate += estimate;
    remaining = (tau >= remaining) ? 0.0 : remaining - tau;
    ++result.substeps;
  }
  return result;
}

/// exp(-i t h) v to within `tol` in the 2-norm.
inline StateVector evolve_krylov(const OperatorSum& h, double t, const StateVector& v, double tol,
                                 KrylovOptions opt = {}) {
  opt.tol = tol;
  return krylov_propagate(MatrixFreeOperator(h), v, t, opt).state;
}

/// One-period interaction-picture evolution
/// U_F = U0^dag(T) exp(-i T H_Ising) = (-1)^L exp(-i T H_Ising),
/// since every single-spin drive factor is exp(-i pi n.S) = -1 at t = T.
inline DenseOperator floquet_operator(const SystemSpec& spec, const DriveField& drive,
                                      int dense_cap = kDefaultDenseCap) {
  require_dense_cap(spec.num_sites, dense_cap, "floquet_operator");
  if (drive.omega <= 0.0) throw std::domain_error("floquet_operator: omega = 0 has no period");
  DenseOperator u = evolve_dense(build_ising_drive(spec, drive), drive.period(), dense_cap);
  if (spec.num_sites % 2 == 1) u = -u;
  return u;
}

/// Repeated one-period propagation with a compiled Hamiltonian.
class FloquetStepper {
 public:
  FloquetStepper(const SystemSpec& spec, const DriveField& drive, KrylovOptions opt = {})
      : num_sites_(spec.num_sites), period_(drive.period()), op_(build_ising_drive(spec, drive)), opt_(opt) {}

  /// U_F v, with `tol` as the error budget of this single period.
  StateVector step(const StateVector& v) const {
    StateVector out = krylov_propagate(op_, v, period_, opt_).state;
    if (num_sites_ % 2 == 1) out = -out;
    return out;
  }

  double period() const { return period_; }
  int num_sites() const { return num_sites_; }

 private:
  int num_sites_;
  double period_;
  MatrixFreeOperator op_;
  KrylovOptions opt_;
};

/// U_F^periods v; `tol` bounds the error of each period.
inline StateVector floquet_apply(const SystemSpec& spec, const DriveField& drive, const StateVector& v, int periods,
                                 double tol = 1e-10) {
  if (periods < 0) throw std::invalid_argument("floquet_apply: periods must be >= 0");
  detail::require_state_length(spec.num_sites, v, "floquet_apply");
  if (periods == 0) return v;
  KrylovOptions opt;
  opt.tol = tol;
  const FloquetStepper stepper(spec, drive, opt);
  StateVector w = v;
  for (int k = 0; k < periods; ++k) w = stepper.step(w);
  return w;
}

/// (1/T) int_0^T H_I(t) dt by composite Simpson, as Pauli weights. An odd
/// step count is rounded up to the next even one.
inline OperatorSum magnus_first_order_terms(const SystemSpec& spec, const DriveField& drive, int quadrature_steps) {
  if (quadrature_steps < 100) throw std::invalid_argument("magnus_first_order: need at least 100 quadrature steps");
  const int n = quadrature_steps + (quadrature_steps % 2);
  const double period = drive.period();
  const double h = period / n;
  OperatorSum avg(spec.num_sites);
  for (int k = 0; k <= n; ++k) {
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    avg += interaction_hamiltonian(spec, drive, k * h).scaled(w * h / (3.0 * period));
  }
  return avg;
}

inline DenseOperator magnus_first_order(const SystemSpec& spec, const DriveField& drive, int quadrature_steps,
                                        int dense_cap = kDefaultDenseCap) {
  require_dense_cap(spec.num_sites, dense_cap, "magnus_first_order");
  return materialize(magnus_first_order_terms(spec, drive, quadrature_steps), dense_cap);
}

}  // namespace floquet
