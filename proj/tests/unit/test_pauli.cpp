// Copyright 2026 The qem-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qem/pauli.hpp"
#include "test_util.hpp"

namespace qem {
namespace {

using testing::Complex;

TEST(Walsh, SingleQubitRows) {
  const RealMatrix w = walsh_matrix(1);
  EXPECT_EQ(RealVector(w.row(0)), RealVector::Ones(4));
  RealVector x(4);
  x << 1, 1, -1, -1;
  EXPECT_EQ(RealVector(w.row(1)), x);
  EXPECT_EQ(RealMatrix(w * w), 4.0 * RealMatrix::Identity(4, 4));
}

TEST(Walsh, MatchesBruteForceCommutation) {
  const int n = 2;
  const RealMatrix w = walsh_matrix(n);
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) {
      const ComplexMatrix a = pauli_matrix(PauliIndex(i, n));
      const ComplexMatrix b = pauli_matrix(PauliIndex(j, n));
      const bool commute = (a * b - b * a).cwiseAbs().maxCoeff() < 1e-12;
      EXPECT_EQ(w(i, j), commute ? 1.0 : -1.0) << i << "," << j;
    }
  }
}

TEST(Walsh, KroneckerPowerSymmetricAndSquaresToScaledIdentity) {
  const RealMatrix w1 = walsh_matrix(1);
  RealMatrix kron_power = w1;
  for (int n = 1; n <= 3; ++n) {
    const RealMatrix w = walsh_matrix(n);
    const auto d = w.rows();
    EXPECT_EQ(w, w.transpose());
    EXPECT_TRUE((w.array().abs() == 1.0).all());
    EXPECT_EQ(RealMatrix(w * w), std::pow(4.0, n) * RealMatrix::Identity(d, d));
    EXPECT_EQ(w, kron_power);
    // Qubit 0 is the least significant digit, so it is the right factor.
    RealMatrix next(4 * d, 4 * d);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) next.block(r * d, c * d, d, d) = w1(r, c) * kron_power;
    }
    kron_power = next;
  }
}

TEST(Walsh, FastTransformMatchesMatrix) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 3; ++n) {
    RealVector x(static_cast<Eigen::Index>(pauli_dimension(n)));
    for (auto &v : x) v = g(rng);
    EXPECT_LT((walsh_transform(x, n) - walsh_matrix(n) * x).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Walsh, QubitCapIsEnforced) {
  EXPECT_THROW(walsh_matrix(kMaxQubits + 1), std::invalid_argument);
  EXPECT_THROW(walsh_matrix(0), std::invalid_argument);
}

TEST(PauliIndex, DigitsRoundTrip) {
  for (std::size_t i = 0; i < 64; ++i) {
    const PauliIndex p(i, 3);
    const auto d = p.digits();
    EXPECT_EQ(PauliIndex::from_digits(d), p);
  }
  const std::vector<Pauli> xz = {Pauli::X, Pauli::Z};
  EXPECT_EQ(PauliIndex::from_digits(xz).value(), 1u + 3u * 4u);
  EXPECT_THROW(PauliIndex(16, 2), std::invalid_argument);
}

TEST(PauliMatrix, SingleQubit) {
  EXPECT_TRUE(pauli_matrix(PauliIndex(0, 1)).isIdentity());
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  EXPECT_EQ(pauli_matrix(PauliIndex(3, 1)), z);
}

TEST(PauliMatrix, TwoQubitSquaresHermitianTraceless) {
  for (std::size_t i = 0; i < 16; ++i) {
    const ComplexMatrix m = pauli_matrix(PauliIndex(i, 2));
    EXPECT_TRUE((m * m).isIdentity(1e-14));
    EXPECT_TRUE(m.isApprox(m.adjoint()));
    if (i != 0) EXPECT_LT(std::abs(m.trace()), 1e-14);
  }
}

TEST(PauliMatrix, QubitZeroIsLeastSignificantBit) {
  const ComplexMatrix x0 = pauli_matrix(PauliIndex(1, 2));
  EXPECT_EQ(x0, testing::kron(testing::sigma(0), testing::sigma(1)));
}

TEST(UnitaryToPtm, IdentityAndPauliX) {
  EXPECT_TRUE(unitary_to_ptm(ComplexMatrix::Identity(4, 4)).matrix().isIdentity(1e-14));
  RealVector d(4);
  d << 1, 1, -1, -1;
  EXPECT_LT((unitary_to_ptm(testing::sigma(1)).matrix() - RealMatrix(d.asDiagonal()))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(UnitaryToPtm, XRotationActsOnYZPlane) {
  for (double theta : {0.1, 0.7, 2.0}) {
    // exp(-i theta X / 2) maps Y -> cos Y + sin Z and Z -> cos Z - sin Y.
    ComplexMatrix u(2, 2);
    u << std::cos(theta / 2), Complex(0, -std::sin(theta / 2)),
        Complex(0, -std::sin(theta / 2)), std::cos(theta / 2);
    RealMatrix expected = RealMatrix::Identity(4, 4);
    expected(2, 2) = std::cos(theta);
    expected(3, 3) = std::cos(theta);
    expected(3, 2) = std::sin(theta);
    expected(2, 3) = -std::sin(theta);
    const PtmOperator g = unitary_to_ptm(u);
    EXPECT_LT((g.matrix() - expected).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_TRUE(g.is_unitary_block());
  }
}

TEST(UnitaryToPtm, RejectsNonUnitary) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 0) = 1.1;
  EXPECT_THROW(unitary_to_ptm(m), std::invalid_argument);
}

TEST(UnitaryToPtm, RepresentationAndOrthogonality) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix u = testing::random_unitary(4, rng);
    const ComplexMatrix v = testing::random_unitary(4, rng);
    const RealMatrix gu = unitary_to_ptm(u).matrix();
    const RealMatrix gv = unitary_to_ptm(v).matrix();
    const RealMatrix guv = unitary_to_ptm(u * v).matrix();
    EXPECT_LT((guv - gu * gv).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((gu.transpose() * gu - RealMatrix::Identity(16, 16)).cwiseAbs().maxCoeff(),
              1e-9);
    EXPECT_TRUE(PtmOperator(gu).is_unitary_block());
  }
}

TEST(DensityToPtm, SingleQubitStates) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1;
  RealVector e(4);
  e << r, 0, 0, r;
  EXPECT_LT((density_to_ptm(zero).coeffs() - e).cwiseAbs().maxCoeff(), 1e-15);

  e << r, 0, 0, 0;
  EXPECT_LT((density_to_ptm(0.5 * ComplexMatrix::Identity(2, 2)).coeffs() - e)
                .cwiseAbs()
                .maxCoeff(),
            1e-15);

  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  e << r, r, 0, 0;
  EXPECT_LT((density_to_ptm(plus).coeffs() - e).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((PtmState::zero_state(1).coeffs() - density_to_ptm(zero).coeffs()).norm(), 1e-15);
  EXPECT_LT((PtmState::plus_state(1).coeffs() - density_to_ptm(plus).coeffs()).norm(), 1e-15);
}

TEST(DensityToPtm, RejectsInvalidMatrices) {
  EXPECT_THROW(density_to_ptm(ComplexMatrix::Identity(2, 2)), std::invalid_argument);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(density_to_ptm(neg), std::invalid_argument);
}

TEST(DensityToPtm, PurityMatchesNorm) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const PtmState mixed = density_to_ptm(testing::random_density(4, rng));
    EXPECT_LE(mixed.purity(), 1.0 + 1e-12);
    const PtmState pure = density_to_ptm(testing::random_pure_density(4, rng));
    EXPECT_NEAR(pure.purity(), 1.0, 1e-10);
  }
}

TEST(ObservableToPtm, Anchors) {
  RealVector e(4);
  e << 0, 0, 0, std::sqrt(2.0);
  EXPECT_LT((observable_to_ptm(testing::sigma(3)).coeffs() - e).cwiseAbs().maxCoeff(), 1e-15);
  e << std::sqrt(2.0), 0, 0, 0;
  EXPECT_LT((observable_to_ptm(ComplexMatrix::Identity(2, 2)).coeffs() - e).cwiseAbs().maxCoeff(),
            1e-15);
  const Observable zz = observable_to_ptm(testing::kron(testing::sigma(3), testing::sigma(3)));
  RealVector expected = RealVector::Zero(16);
  expected[3 + 3 * 4] = 2.0;
  EXPECT_LT((zz.coeffs() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ObservableToPtm, StrictFlagChecksSpectrum) {
  ComplexMatrix big = ComplexMatrix::Zero(2, 2);
  big(0, 0) = 1.2;
  EXPECT_NO_THROW(observable_to_ptm(big));
  EXPECT_THROW(observable_to_ptm(big, true), std::invalid_argument);
}

TEST(Expectation, Anchors) {
  const Observable z = observable_to_ptm(testing::sigma(3));
  EXPECT_NEAR(expectation(z, PtmState::zero_state(1)), 1.0, 1e-15);
  EXPECT_NEAR(expectation(z, PtmState::maximally_mixed(1)), 0.0, 1e-15);
  const PtmOperator x = unitary_to_ptm(testing::sigma(1));
  EXPECT_NEAR(expectation(z, PtmState(x.matrix() * PtmState::zero_state(1).coeffs())), -1.0,
              1e-15);
  EXPECT_THROW(expectation(z, PtmState::zero_state(2)), std::invalid_argument);
}

TEST(Expectation, PairingEqualsTrace) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix m = testing::random_bounded_hermitian(4, rng);
    const ComplexMatrix rho = testing::random_density(4, rng);
    const double direct = (m * rho).trace().real();
    EXPECT_NEAR(expectation(observable_to_ptm(m), density_to_ptm(rho)), direct, 1e-10);
  }
}

TEST(LocalMap, MatchesDenseKroneckerEmbedding) {
  std::mt19937_64 rng(9);
  const int n = 3;
  const ComplexMatrix u = testing::random_unitary(4, rng);
  // Local qubit 0 -> register qubit 2, local qubit 1 -> register qubit 0.
  const LocalMap map(unitary_to_ptm(u).matrix(), {2, 0}, n);
  // Full unitary: permute u onto qubits (2, 0) with identity on qubit 1.
  ComplexMatrix full = ComplexMatrix::Zero(8, 8);
  for (int in = 0; in < 8; ++in) {
    for (int out = 0; out < 8; ++out) {
      if (((in >> 1) & 1) != ((out >> 1) & 1)) continue;
      const int li = ((in >> 2) & 1) | ((in & 1) << 1);
      const int lo = ((out >> 2) & 1) | ((out & 1) << 1);
      full(out, in) = u(lo, li);
    }
  }
  const RealMatrix dense = unitary_to_ptm(full).matrix();
  EXPECT_LT((map.embed().matrix() - dense).cwiseAbs().maxCoeff(), 1e-12);

  std::normal_distribution<double> g;
  RealVector v(64);
  for (auto &x : v) x = g(rng);
  RealMatrix a(64, 64);
  for (auto &x : a.reshaped()) x = g(rng);
  EXPECT_LT((map.apply(v) - dense * v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((map.apply_transpose(v) - dense.transpose() * v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((map.conjugate(a) - dense * a * dense.transpose()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Choi, IdentityIsMaximallyEntangledProjector) {
  const ComplexMatrix j = PtmOperator::identity(2).choi();
  ComplexMatrix expected = ComplexMatrix::Zero(16, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) expected(5 * a, 5 * b) = 1.0;
  }
  EXPECT_LT((j - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Choi, MatchesDefinitionForKrausMap) {
  std::mt19937_64 rng(2);
  const ComplexMatrix k = 0.8 * testing::random_unitary(2, rng);
  const PtmOperator r = operation_to_ptm(k);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(2, 2);
      e(a, b) = 1.0;
      expected.block(2 * a, 2 * b, 2, 2) = k * e * k.adjoint();
    }
  }
  EXPECT_LT((r.choi() - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_TRUE(r.is_completely_positive());
}

TEST(Choi, TransposeIsNotCompletelyPositive) {
  RealMatrix t = RealMatrix::Identity(4, 4);
  t(2, 2) = -1.0;
  EXPECT_FALSE(PtmOperator(t).is_completely_positive());
  std::mt19937_64 rng(8);
  EXPECT_TRUE(unitary_to_ptm(testing::random_unitary(4, rng)).is_completely_positive());
}

TEST(LocalMap, RejectsBadSupport) {
  const RealMatrix id = RealMatrix::Identity(16, 16);
  EXPECT_THROW(LocalMap(id, {0, 0}, 2), std::invalid_argument);
  EXPECT_THROW(LocalMap(id, {0, 2}, 2), std::invalid_argument);
  EXPECT_THROW(LocalMap(id, {0}, 2), std::invalid_argument);
}

}  // namespace
}  // namespace qem
