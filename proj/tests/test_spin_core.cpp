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
#include "floquet/pauli.hpp"
#include "floquet/spectra.hpp"
#include "test_util.hpp"

using namespace floquet;

TEST_CASE("identity string leaves the state unchanged", "[spin_core]") {
  std::mt19937_64 rng(11);
  const StateVector v = testing::random_state(5, rng);
  const PauliString id(5);
  REQUIRE(id.is_identity());
  REQUIRE((apply_pauli_string(id, v) - v).norm() == 0.0);
}

TEST_CASE("Z on site 0 fixes the all-zero state", "[spin_core]") {
  const StateVector v = basis_state(3, 0);
  const StateVector out = apply_pauli_string(PauliString::single(3, 0, Pauli::Z), v);
  REQUIRE((out - v).norm() == 0.0);
  // bit 0 set means Z_0 = -1
  const StateVector one = basis_state(3, 1);
  REQUIRE((apply_pauli_string(PauliString::single(3, 0, Pauli::Z), one) + one).norm() == 0.0);
}

TEST_CASE("XX on two sites maps |00> to |11> and matches the Kronecker matrix", "[spin_core]") {
  const auto xx = PauliString::parse("XX");
  const StateVector out = apply_pauli_string(xx, basis_state(2, 0));
  REQUIRE((out - basis_state(2, 3)).norm() == 0.0);

  OperatorSum op(2);
  op.add(1.0, xx);
  const DenseOperator kron = oracle::dense_hamiltonian_naive(op);
  for (std::uint64_t b = 0; b < 4; ++b) {
    const StateVector col = apply_pauli_string(xx, basis_state(2, b));
    REQUIRE((col - kron.col(static_cast<Eigen::Index>(b))).norm() < 1e-15);
  }
}

TEST_CASE("Y strings carry the i factors", "[spin_core]") {
  // Y|0> = i|1>, Y|1> = -i|0>
  const auto y = PauliString::parse("Y");
  REQUIRE((apply_pauli_string(y, basis_state(1, 0)) - Complex(0, 1) * basis_state(1, 1)).norm() == 0.0);
  REQUIRE((apply_pauli_string(y, basis_state(1, 1)) - Complex(0, -1) * basis_state(1, 0)).norm() == 0.0);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ps = testing::random_string(4, rng);
    OperatorSum op(4);
    op.add(1.0, ps);
    if (op.empty()) continue;
    const DenseOperator kron = oracle::dense_hamiltonian_naive(op);
    const StateVector v = testing::random_state(4, rng);
    REQUIRE((apply_pauli_string(ps, v) - kron * v).norm() < 1e-14);
  }
}

TEST_CASE("every Pauli string squares to the identity", "[spin_core][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    const auto ps = testing::random_string(n, rng);
    const StateVector v = testing::random_state(n, rng);
    REQUIRE((apply_pauli_string(ps, apply_pauli_string(ps, v)) - v).norm() < 1e-14);
  }
}

TEST_CASE("apply_pauli_string rejects a length mismatch", "[spin_core]") {
  REQUIRE_THROWS_AS(apply_pauli_string(PauliString(3), basis_state(2, 0)), DimensionError);
  REQUIRE_THROWS_AS(apply_operator_sum(OperatorSum(3), basis_state(4, 0)), DimensionError);
  OperatorSum op(3);
  REQUIRE_THROWS_AS(op.add(1.0, PauliString(2)), DimensionError);
}

TEST_CASE("apply_operator_sum basics", "[spin_core]") {
  std::mt19937_64 rng(8);
  const StateVector v = testing::random_state(3, rng);
  REQUIRE(apply_operator_sum(OperatorSum(3), v).norm() == 0.0);

  OperatorSum zz(2);
  zz.add(1.0, "ZZ");
  REQUIRE((apply_operator_sum(zz, basis_state(2, 0)) - basis_state(2, 0)).norm() == 0.0);
}

TEST_CASE("random 10-term sum on L=6 matches the dense oracle", "[spin_core]") {
  std::mt19937_64 rng(2024);
  const OperatorSum op = testing::random_operator_sum(6, 10, rng);
  REQUIRE(op.size() == 10);
  const StateVector v = testing::random_state(6, rng);
  const DenseOperator dense = oracle::dense_hamiltonian_naive(op);
  REQUIRE((apply_operator_sum(op, v) - dense * v).norm() < 1e-12);
}

TEST_CASE("materialize agrees with matrix-free application and is Hermitian", "[spin_core][property]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 6;
    const OperatorSum op = testing::random_operator_sum(n, 1 + trial % 12, rng);
    const DenseOperator m = materialize(op);
    REQUIRE((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    const StateVector v = testing::random_state(n, rng);
    REQUIRE((apply_operator_sum(op, v) - m * v).norm() < 1e-12);
  }
}

TEST_CASE("materialize small cases", "[spin_core]") {
  OperatorSum id(2);
  id.add(1.0, PauliString(2));
  REQUIRE((materialize(id) - DenseOperator::Identity(4, 4)).norm() == 0.0);

  OperatorSum z(1);
  z.add(1.0, "Z");
  DenseOperator expected = DenseOperator::Zero(2, 2);
  expected(0, 0) = 1.0;
  expected(1, 1) = -1.0;
  REQUIRE((materialize(z) - expected).norm() == 0.0);
}

TEST_CASE("Ising chain at L=3 matches the Kronecker construction entry for entry", "[spin_core]") {
  const auto h = build_ising_drive(SystemSpec::chain(3, 1.0), DriveField{0.0, 0.0, 0.0});
  const DenseOperator engine = materialize(h);
  const DenseOperator naive = oracle::dense_hamiltonian_naive(h);
  REQUIRE((engine - naive).cwiseAbs().maxCoeff() < 1e-13);
  // J only: diagonal with ZZ eigenvalues
  REQUIRE(engine(0, 0).real() == Catch::Approx(2.0));
}

TEST_CASE("materialize enforces the dense cap", "[spin_core]") {
  REQUIRE_THROWS_AS(materialize(OperatorSum(13)), DimensionError);
  REQUIRE_THROWS_AS(materialize(OperatorSum(5), 4), DimensionError);
  REQUIRE_NOTHROW(materialize(OperatorSum(4), 4));
}

TEST_CASE("OperatorSum drops zero weights and merges duplicates", "[spin_core]") {
  OperatorSum op(2);
  op.add(0.0, "XX");
  REQUIRE(op.empty());
  op.add(0.5, "ZI");
  op.add(0.25, "ZI");
  REQUIRE(op.size() == 1);
  REQUIRE(op.coefficient("ZI") == 0.75);
  op.add(-0.75, "ZI");
  REQUIRE(op.empty());
}

TEST_CASE("complex weights are rejected", "[spin_core]") {
  OperatorSum op(1);
  REQUIRE_THROWS_AS(op.add(Complex(1.0, 0.5), PauliString::parse("X")), std::invalid_argument);
  REQUIRE_NOTHROW(op.add(Complex(1.0, 0.0), PauliString::parse("X")));
  REQUIRE(op.coefficient("X") == 1.0);
}

TEST_CASE("expectation values", "[spin_core]") {
  OperatorSum z0(3);
  z0.add(1.0, "ZII");
  OperatorSum x0(3);
  x0.add(1.0, "XII");
  const StateVector zero = basis_state(3, 0);
  REQUIRE(expectation(z0, zero) == 1.0);
  REQUIRE(expectation(x0, zero) == 0.0);
}

TEST_CASE("XXX expectation on its Lanczos ground state equals the eigenvalue", "[spin_core]") {
  const auto h = build_heisenberg(SystemSpec::chain(4, 1.0), 1.0 / 3, 1.0 / 3, 1.0 / 3);
  const GroundState gs = ground_state(h, 1e-12);
  REQUIRE(std::abs(expectation(h, gs.state) - gs.energy) < 1e-10);

  Eigen::SelfAdjointEigenSolver<DenseOperator> exact(oracle::dense_hamiltonian_naive(h));
  REQUIRE(std::abs(gs.energy - exact.eigenvalues()(0)) < 1e-10);
}

TEST_CASE("expectation is real for complex states", "[spin_core]") {
  // (|0> + i|1>)/sqrt(2) is the +1 eigenstate of Y and has <X> = 0
  StateVector v(2);
  v << Complex(1, 0), Complex(0, 1);
  v /= std::sqrt(2.0);
  OperatorSum x(1);
  x.add(1.0, "X");
  OperatorSum y(1);
  y.add(1.0, "Y");
  REQUIRE(std::abs(expectation(x, v)) < 1e-15);
  REQUIRE(expectation(y, v) == Catch::Approx(1.0).margin(1e-15));
}
