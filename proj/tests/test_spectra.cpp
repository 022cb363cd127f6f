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

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "floquet/models.hpp"
#include "floquet/oracle.hpp"
#include "floquet/spectra.hpp"
#include "test_util.hpp"

using namespace floquet;

namespace {

OperatorSum xxx_chain(int n) { return build_heisenberg(SystemSpec::chain(n, 1.0), 1.0 / 3, 1.0 / 3, 1.0 / 3); }

}  // namespace

TEST_CASE("full diagonalization of single-spin operators", "[spectra]") {
  OperatorSum z(1);
  z.add(1.0, "Z");
  const EigenSystem ez = full_diagonalize(z);
  REQUIRE(ez.eigenvalues(0) == Catch::Approx(-1.0));
  REQUIRE(ez.eigenvalues(1) == Catch::Approx(1.0));

  OperatorSum x(1);
  x.add(1.0, "X");
  const EigenSystem ex = full_diagonalize(x);
  REQUIRE(ex.eigenvalues(0) == Catch::Approx(-1.0));
  StateVector minus(2);
  minus << 1.0, -1.0;
  minus /= std::sqrt(2.0);
  REQUIRE(std::abs(std::abs(ex.eigenvectors.col(0).dot(minus)) - 1.0) < 1e-14);
}

TEST_CASE("two-site XXX splits into singlet and triplet", "[spectra]") {
  // (1/3) sigma.sigma has eigenvalue -1 on the singlet and +1/3 on the triplet.
  const EigenSystem es = full_diagonalize(xxx_chain(2));
  Eigen::SelfAdjointEigenSolver<DenseOperator> ref(oracle::dense_hamiltonian_naive(xxx_chain(2)));
  REQUIRE((es.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(es.eigenvalues(0) == Catch::Approx(-1.0));
  for (int k = 1; k < 4; ++k) REQUIRE(es.eigenvalues(k) == Catch::Approx(1.0 / 3));
}

TEST_CASE("full diagonalization reconstructs the operator", "[spectra][property]") {
  std::mt19937_64 rng(12);
  for (int n = 1; n <= 6; ++n) {
    const auto h = testing::random_operator_sum(n, 3 * n, rng);
    const EigenSystem es = full_diagonalize(h);
    const DenseOperator rebuilt = es.eigenvectors * es.eigenvalues.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
    REQUIRE((rebuilt - materialize(h)).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index k = 0; k + 1 < es.size(); ++k) REQUIRE(es.eigenvalues(k) <= es.eigenvalues(k + 1));
    const DenseOperator hm = materialize(h);
    for (Eigen::Index k = 0; k < es.size(); ++k) {
      REQUIRE((hm * es.eigenvectors.col(k) - es.eigenvalues(k) * es.eigenvectors.col(k)).norm() < 1e-10);
    }
  }
  REQUIRE_THROWS_AS(full_diagonalize(OperatorSum(13)), DimensionError);
}

TEST_CASE("ground state of a field-polarized chain", "[spectra]") {
  const int n = 6;
  OperatorSum h(n);
  for (int i = 0; i < n; ++i) h.add(-1.0, PauliString::single(n, i, Pauli::Z));
  const GroundState gs = ground_state(h, 1e-10);
  REQUIRE(gs.energy == Catch::Approx(-n).epsilon(1e-12));
  REQUIRE(std::abs(std::abs(gs.state(0)) - 1.0) < 1e-10);
  REQUIRE_FALSE(gs.degenerate);
  REQUIRE(gs.gap == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("XXX ground states", "[spectra]") {
  SECTION("L=2 is the singlet at energy -1") {
    const GroundState gs = ground_state(xxx_chain(2), 1e-12);
    REQUIRE(gs.energy == Catch::Approx(-1.0).epsilon(1e-12));
    StateVector singlet = StateVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(std::abs(singlet.dot(gs.state)) - 1.0) < 1e-12);
  }
  SECTION("L=12 matches full diagonalization at the dense cap") {
    const auto h = xxx_chain(12);
    const GroundState gs = ground_state(h, 1e-9);
    const EigenSystem es = full_diagonalize(h, kDefaultDenseCap, false);
    REQUIRE(std::abs(gs.energy - es.eigenvalues(0)) < 1e-9);
    REQUIRE(gs.residual <= 1e-9);
    REQUIRE_FALSE(gs.degenerate);
  }
  SECTION("odd L is flagged as degenerate") {
    const GroundState gs = ground_state(xxx_chain(5), 1e-10);
    REQUIRE(gs.degenerate);
    const EigenSystem es = full_diagonalize(xxx_chain(5));
    REQUIRE(std::abs(gs.energy - es.eigenvalues(0)) < 1e-10);
  }
  SECTION("reruns are bit-identical") {
    const GroundState a = ground_state(xxx_chain(8), 1e-10);
    const GroundState b = ground_state(xxx_chain(8), 1e-10);
    REQUIRE(a.energy == b.energy);
    REQUIRE((a.state - b.state).norm() == 0.0);
  }
}

TEST_CASE("ground state energy obeys the variational bound", "[spectra][property]") {
  std::mt19937_64 rng(41);
  const auto h = build_ising_drive(SystemSpec::chain(6, 1.0), DriveField{1.7, kXxxAngle, 0.0});
  const GroundState gs = ground_state(h, 1e-10);
  for (int k = 0; k < 100; ++k) REQUIRE(gs.energy <= expectation(h, testing::random_state(6, rng)));
}

TEST_CASE("spectral norm", "[spectra]") {
  REQUIRE(spectral_norm(DenseOperator::Zero(8, 8)) == 0.0);
  REQUIRE(spectral_norm(2.0 * DenseOperator::Identity(8, 8)) == Catch::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(64);
  std::normal_distribution<double> nd;
  DenseOperator a(64, 64);
  for (Eigen::Index i = 0; i < 64; ++i)
    for (Eigen::Index j = 0; j < 64; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  const double svd = Eigen::JacobiSVD<DenseOperator>(a).singularValues()(0);
  SpectralNormOptions power;
  power.dense_limit = 0;
  REQUIRE(std::abs(spectral_norm(a, power) - svd) < 1e-9);
  REQUIRE(std::abs(spectral_norm(a) - svd) < 1e-9);

  DenseOperator bad = DenseOperator::Identity(2, 2);
  bad(0, 1) = std::nan("");
  REQUIRE_THROWS(spectral_norm(bad));
  SpectralNormOptions starved = power;
  starved.max_iterations = 2;
  REQUIRE_THROWS_AS(spectral_norm(a, starved), ConvergenceError);
}

TEST_CASE("spectral norm is submultiplicative and subadditive", "[spectra][property]") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const DenseOperator a = testing::random_hermitian(16, rng) + Complex(0, 1) * testing::random_hermitian(16, rng);
    const DenseOperator b = testing::random_hermitian(16, rng);
    const double na = spectral_norm(a);
    const double nb = spectral_norm(b);
    REQUIRE(spectral_norm(a * b) <= na * nb * (1 + 1e-12));
    REQUIRE(spectral_norm(a + b) <= (na + nb) * (1 + 1e-12));
  }
}
