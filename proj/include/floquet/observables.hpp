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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "floquet/core.hpp"
#include "floquet/models.hpp"
#include "floquet/pauli.hpp"
#include "floquet/propagators.hpp"
#include "floquet/spectra.hpp"

namespace floquet {

// ---------------------------------------------------------------------------
// Floquet error norm
// ---------------------------------------------------------------------------

/// ||exp(-i T h_eff) - U_B U_F U_B^dag|| given the eigensystem of h_eff, which
/// is expressed in the frame where the drive points along z. Reusing the
/// eigensystem across an omega sweep avoids re-diagonalizing h_eff.
inline double floquet_error_norm(const SystemSpec& spec, const DriveField& drive, const EigenSystem& h_eff,
                                 int dense_cap = kDefaultDenseCap) {
  require_dense_cap(spec.num_sites, dense_cap, "floquet_error_norm");
  if (drive.phi != 0.0) throw std::invalid_argument("floquet_error_norm: the basis change assumes phi = 0");
  if (h_eff.size() != static_cast<Eigen::Index>(hilbert_dim(spec.num_sites))) {
    throw DimensionError("floquet_error_norm: h_eff does not match the chain length");
  }
  const DenseOperator rotated = BasisChange(drive.theta, spec.num_sites).conjugate(floquet_operator(spec, drive, dense_cap));
  return spectral_norm(evolve_dense(h_eff, drive.period()) - rotated);
}

inline double floquet_error_norm(const SystemSpec& spec, const DriveField& drive, const OperatorSum& h_eff,
                                 int dense_cap = kDefaultDenseCap) {
  if (h_eff.num_sites() != spec.num_sites) throw DimensionError("floquet_error_norm: h_eff length mismatch");
  require_dense_cap(spec.num_sites, dense_cap, "floquet_error_norm");
  return floquet_error_norm(spec, drive, full_diagonalize(h_eff, dense_cap), dense_cap);
}

// ---------------------------------------------------------------------------
// Loschmidt echo and rate function
// ---------------------------------------------------------------------------

struct EchoOptions {
  int dense_limit = 8;  ///< exact diagonalization up to this L, Krylov above
  double tol = 1e-10;
};

/// |<v| exp(-i t h) |v>|^2.
inline double loschmidt_echo(const StateVector& v, const OperatorSum& h, double t, const EchoOptions& opt = {}) {
  detail::require_state_length(h.num_sites(), v, "loschmidt_echo");
  if (t == 0.0) return std::norm(v.squaredNorm());
  Complex amplitude;
  if (h.num_sites() <= opt.dense_limit) {
    const EigenSystem es = full_diagonalize(h, std::max(opt.dense_limit, 1));
    const Eigen::VectorXcd c = es.eigenvectors.adjoint() * v;
    amplitude = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) amplitude += std::norm(c(k)) * std::polar(1.0, -t * es.eigenvalues(k));
  } else {
    KrylovOptions kopt;
    kopt.tol = opt.tol;
    amplitude = v.dot(krylov_propagate(MatrixFreeOperator(h), v, t, kopt).state);
  }
  return std::norm(amplitude);
}

struct RatePoint {
  double omega = 0.0;
  double echo = 0.0;
  double rate = 0.0;
  /// Set when echo is zero and the rate is the +infinity sentinel.
  bool diverged = false;
};

/// -log(echo) / L; +infinity when the echo vanishes.
inline double rate_function(double echo, int num_sites) {
  if (num_sites < 1) throw std::invalid_argument("rate_function: L must be >= 1");
  if (!(echo >= 0.0)) throw std::invalid_argument("rate_function: echo must be a probability");
  if (echo == 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(echo) / num_sites;
}

inline RatePoint make_rate_point(double omega, double echo, int num_sites) {
  RatePoint p{omega, echo, rate_function(echo, num_sites), false};
  p.diverged = std::isinf(p.rate);
  return p;
}

// ---------------------------------------------------------------------------
// Inverse participation ratio
// ---------------------------------------------------------------------------

/// sum_n |<n|v>|^4 over a complete eigenbasis.
inline double ipr_direct(const StateVector& v, const EigenSystem& es) {
  if (!es.has_vectors() || es.eigenvectors.rows() != es.eigenvectors.cols()) {
    throw std::invalid_argument("ipr_direct: eigenbasis is incomplete");
  }
  if (es.eigenvectors.rows() != v.size()) throw DimensionError("ipr_direct: state and basis sizes differ");
  const Eigen::VectorXcd c = es.eigenvectors.adjoint() * v;
  double sum = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) sum += std::norm(c(k)) * std::norm(c(k));
  return sum;
}

/// (1/M) sum_{k=1..M} |<v| U_F^k |v>|^2 with one Krylov period per k. It tends
/// to the IPR in the Floquet eigenbasis when the quasi-spectrum is non-degenerate.
inline double ipr_echo_average(const StateVector& v, const SystemSpec& spec, const DriveField& drive, int periods,
                               double tol = 1e-10) {
  if (periods < 1) throw std::invalid_argument("ipr_echo_average: periods must be >= 1");
  detail::require_state_length(spec.num_sites, v, "ipr_echo_average");
  KrylovOptions opt;
  opt.tol = tol;
  const FloquetStepper stepper(spec, drive, opt);
  StateVector w = v;
  double sum = 0.0;
  for (int k = 0; k < periods; ++k) {
    w = stepper.step(w);
    sum += std::norm(v.dot(w));
  }
  return sum / periods;
}

/// -log(IPR) / L.
inline double lambda_ipr(double ipr, int num_sites) {
  if (!(ipr > 0.0)) throw std::invalid_argument("lambda_ipr: IPR must be > 0");
  if (num_sites < 1) throw std::invalid_argument("lambda_ipr: L must be >= 1");
  return -std::log(ipr) / num_sites;
}

// ---------------------------------------------------------------------------
// Kink detection
// ---------------------------------------------------------------------------

/// A slope discontinuity of the rate as a function of log(omega). Slopes are
/// d(rate)/d(log omega) on the grid segments either side of the kink.
struct KinkReport {
  double omega_star = 0.0;
  double left_slope = 0.0;
  double right_slope = 0.0;
  double strength = 0.0;
  /// Slope jump at the kink node divided by the local noise scale.
  double significance = 0.0;
};

struct KinkOptions {
  double threshold = 5.0;  ///< multiple of the local median slope jump
  int window = 4;          ///< nodes on each side used for the local median
  double coarse_log_step = 0.1;
  double nonuniform_ratio = 2.0;
};

/// Flags nodes where the jump in segment slope (the second difference of rate
/// against log omega, scaled by the spacing) exceeds `threshold` times the
/// median jump of the surrounding window. Adjacent flagged nodes are merged
/// into one kink placed at the strongest node. Results ascend in omega.
inline std::vector<KinkReport> detect_kinks(std::span<const RatePoint> points, const KinkOptions& opt = {},
                                            std::vector<std::string>* warnings = nullptr) {
  const auto n = points.size();
  if (n < 5) throw std::invalid_argument("detect_kinks: need at least 5 points");
  std::vector<double> x(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(points[i].omega > 0.0)) throw std::invalid_argument("detect_kinks: omega must be > 0");
    if (!std::isfinite(points[i].rate)) throw std::invalid_argument("detect_kinks: non-finite rate");
    if (i > 0 && !(points[i].omega > points[i - 1].omega)) {
      throw std::invalid_argument("detect_kinks: omega must be strictly increasing");
    }
    x[i] = std::log(points[i].omega);
    r[i] = points[i].rate;
  }

  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    min_step = std::min(min_step, x[i + 1] - x[i]);
    max_step = std::max(max_step, x[i + 1] - x[i]);
  }
  if (warnings) {
    if (max_step > opt.coarse_log_step) {
      warnings->push_back("detect_kinks: grid too coarse, largest log-omega step " + std::to_string(max_step));
    }
    if (max_step > opt.nonuniform_ratio * min_step) {
      warnings->push_back("detect_kinks: grid is far from uniform in log omega");
    }
  }

  std::vector<double> slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (r[i + 1] - r[i]) / (x[i + 1] - x[i]);
  // jump[i] lives at node i + 1.
  std::vector<double> jump(n - 2);
  for (std::size_t i = 0; i + 2 < n; ++i) jump[i] = std::abs(slope[i + 1] - slope[i]);

  double scale = 0.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale / min_step;

  auto median_around = [&](std::size_t centre) {
    std::vector<double> vals;
    const auto w = static_cast<std::ptrdiff_t>(opt.window);
    const auto c = static_cast<std::ptrdiff_t>(centre);
    for (std::ptrdiff_t j = c - w - 1; j <= c + w + 1; ++j) {
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(jump.size()) || std::abs(j - c) <= 1) continue;
      vals.push_back(jump[static_cast<std::size_t>(j)]);
    }
    if (vals.size() < 2) {
      vals.clear();
      for (std::size_t j = 0; j < jump.size(); ++j) {
        if (std::abs(static_cast<std::ptrdiff_t>(j) - c) > 1) vals.push_back(jump[j]);
      }
    }
    if (vals.empty()) return 0.0;
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(vals.size() / 2), vals.end());
    return vals[vals.size() / 2];
  };

  std::vector<double> score(jump.size(), 0.0);
  std::vector<bool> flagged(jump.size(), false);
  for (std::size_t i = 0; i < jump.size(); ++i) {
    const double noise = std::max(median_around(i), floor);
    score[i] = jump[i] / noise;
    flagged[i] = score[i] > opt.threshold;
  }

  std::vector<KinkReport> kinks;
  for (std::size_t i = 0; i < jump.size();) {
    if (!flagged[i]) {
      ++i;
      continue;
    }
    std::size_t last = i;
    while (last + 1 < jump.size() && flagged[last + 1]) ++last;
    std::size_t best = i;
    for (std::size_t j = i; j <= last; ++j) {
      if (jump[j] > jump[best]) best = j;
    }
    KinkReport k;
    k.omega_star = points[best + 1].omega;
    k.left_slope = slope[i];
    k.right_slope = slope[last + 1];
    k.strength = std::abs(k.right_slope - k.left_slope);
    k.significance = score[best];
    kinks.push_back(k);
    i = last + 1;
  }
  return kinks;
}

}  // namespace floquet
