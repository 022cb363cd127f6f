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
#include "floquet/propagators.hpp"
#include "test_util.hpp"

using namespace floquet;

TEST_CASE("naive Kronecker assembly", "[oracle]") {
  OperatorSum id(3);
  id.add(1.0, PauliString(3));
  REQUIRE((oracle::dense_hamiltonian_naive(id) - DenseOperator::Identity(8, 8)).norm() == 0.0);

  OperatorSum zz(2);
  zz.add(1.0, "ZZ");
  const DenseOperator m = oracle::dense_hamiltonian_naive(zz);
  const Eigen::Vector4d diag(1, -1, -1, 1);
  REQUIRE((m - diag.cast<Complex>().asDiagonal().toDenseMatrix()).norm() == 0.0);

  // bit 0 is site 0: X on site 0 connects |0> and |1>
  OperatorSum x0(2);
  x0.add(1.0, "XI");
  REQUIRE(oracle::dense_hamiltonian_naive(x0)(1, 0) == Complex(1.0, 0.0));

  const auto ising = build_ising_drive(SystemSpec::chain(3, 0.8), DriveField{2.3, 0.6, 0.4});
  REQUIRE((oracle::dense_hamiltonian_naive(ising) - materialize(ising)).cwiseAbs().maxCoeff() < 1e-13);
  REQUIRE_THROWS_AS(oracle::dense_hamiltonian_naive(OperatorSum(9)), DimensionError);
}

TEST_CASE("scaling-and-squaring exponential", "[oracle]") {
  std::mt19937_64 rng(5);
  const DenseOperator a = testing::random_hermitian(16, rng);
  REQUIRE((oracle::exp_scaling_squaring(a, 0.0) - DenseOperator::Identity(16, 16)).norm() == 0.0);

  const Eigen::Vector3d d(0.5, -1.25, 2.0);
  const DenseOperator diag = d.cast<Complex>().asDiagonal().toDenseMatrix();
  const DenseOperator e = oracle::exp_scaling_squaring(diag, 0.7);
  for (int k = 0; k < 3; ++k) REQUIRE(std::abs(e(k, k) - std::polar(1.0, -0.7 * d(k))) < 1e-14);

  // eigendecomposition route for a random Hermitian 16x16
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(a);
  const DenseOperator via_eig = es.eigenvectors() *
                                es.eigenvalues().unaryExpr([](double l) { return std::polar(1.0, -1.3 * l); }).asDiagonal() *
                                es.eigenvectors().adjoint();
  REQUIRE(testing::norm2(oracle::exp_scaling_squaring(a, 1.3) - via_eig) < 1e-11);
  REQUIRE_THROWS_AS(oracle::exp_scaling_squaring(DenseOperator::Zero(65, 65), 1.0), DimensionError);
}

TEST_CASE("time-ordered propagator", "[oracle]") {
  SECTION("no couplings gives the identity") {
    const DenseOperator u = oracle::time_ordered_propagator(SystemSpec::chain(3, 0.0), DriveField{4.0, 1.0, 0.0}, 1000);
    REQUIRE(testing::norm2(u - DenseOperator::Identity(8, 8)) < 1e-13);
  }
  SECTION("second-order convergence under step doubling") {
    const auto spec = SystemSpec::chain(3, 1.0);
    const DriveField d{2.0, kXxxAngle, 0.0};
    const DenseOperator u1 = oracle::time_ordered_propagator(spec, d, 1000);
    const DenseOperator u2 = oracle::time_ordered_propagator(spec, d, 2000);
    const DenseOperator u4 = oracle::time_ordered_propagator(spec, d, 4000);
    const double first = testing::norm2(u2 - u1);
    const double second = testing::norm2(u4 - u2);
    REQUIRE(first / second == Catch::Approx(4.0).epsilon(0.05));
  }
  SECTION("L=2 XXX point at Omega=20 matches the Floquet operator") {
    const auto spec = SystemSpec::chain(2, 1.0);
    const DriveField d{20.0, kXxxAngle, 0.0};
    REQUIRE(testing::norm2(oracle::time_ordered_propagator(spec, d, 100000) - floquet_operator(spec, d)) < 1e-8);
  }
  SECTION("the residual shrinks like dt^2") {
    const auto spec = SystemSpec::chain(2, 1.0);
    const DriveField d{3.0, 0.7, 0.0};
    const DenseOperator exact = floquet_operator(spec, d);
    const double coarse = testing::norm2(oracle::time_ordered_propagator(spec, d, 1000) - exact);
    const double fine = testing::norm2(oracle::time_ordered_propagator(spec, d, 4000) - exact);
    // C = residual / dt^2 is the same constant at both step sizes
    const double dt = d.period() / 1000;
    const double c_coarse = coarse / (dt * dt);
    const double c_fine = fine / (dt * dt / 16);
    REQUIRE(c_fine == Catch::Approx(c_coarse).epsilon(0.02));
  }
  SECTION("limits") {
    REQUIRE_THROWS_AS(oracle::time_ordered_propagator(SystemSpec::chain(7, 1.0), DriveField{1.0, 1.0, 0.0}, 1000),
                      DimensionError);
    REQUIRE_THROWS(oracle::time_ordered_propagator(SystemSpec::chain(2, 1.0), DriveField{1.0, 1.0, 0.0}, 999));
    REQUIRE_THROWS(oracle::OracleConfig{0.5}.validate());
    REQUIRE(oracle::OracleConfig{}.steps() == 10000);
  }
}
