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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qem {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest supported qubit count. A dense PTM at this size is 4096x4096.
inline constexpr int kMaxQubits = 6;

/// Absolute tolerance for Hermiticity, unitarity and trace checks.
inline constexpr double kMatrixTolerance = 1e-10;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Returns 4^n. Throws std::invalid_argument unless 1 <= n <= kMaxQubits.
std::size_t pauli_dimension(int num_qubits);

/// Returns 2^n with the same range check as pauli_dimension.
std::size_t hilbert_dimension(int num_qubits);

/// Infers n from a PTM dimension 4^n. Throws if dim is not such a power.
int qubits_from_pauli_dimension(std::size_t dim);

/**
 * Index of an n-qubit Pauli string.
 *
 * Little-endian base 4: qubit q occupies digit q, with 0=I, 1=X, 2=Y, 3=Z.
 */
class PauliIndex {
 public:
  PauliIndex(std::size_t value, int num_qubits);

  /// digits[q] is the Pauli acting on qubit q.
  static PauliIndex from_digits(std::span<const Pauli> digits);

  std::size_t value() const noexcept { return value_; }
  int num_qubits() const noexcept { return num_qubits_; }
  Pauli digit(int qubit) const;
  std::vector<Pauli> digits() const;

  bool operator==(const PauliIndex &) const = default;

 private:
  std::size_t value_;
  int num_qubits_;
};

/// True iff Pauli strings a and b anticommute.
bool paulis_anticommute(std::size_t a, std::size_t b) noexcept;

/// Commutation matrix: +1 where S_i, S_j commute, -1 where they anticommute.
RealMatrix walsh_matrix(int num_qubits);

/// Computes walsh_matrix(n) * x with per-qubit butterflies in O(n 4^n).
RealVector walsh_transform(const RealVector &x, int num_qubits);

ComplexMatrix pauli_matrix(const PauliIndex &index);

/// Real 4^n x 4^n transfer matrix of a linear map on operators.
class PtmOperator {
 public:
  explicit PtmOperator(RealMatrix entries);

  static PtmOperator identity(int num_qubits);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(entries_.rows());
  }
  const RealMatrix &matrix() const noexcept { return entries_; }

  /// First row equals e_0^T.
  bool is_trace_preserving(double tol = 1e-12) const;
  /// Block form [[1,0],[*,Q]] with Q orthogonal.
  bool is_unitary_block(double tol = 1e-9) const;

  PtmOperator operator*(const PtmOperator &rhs) const;

  /// Choi matrix sum_ab |a><b| (x) Lambda(|a><b|), of size 4^n x 4^n.
  ComplexMatrix choi() const;
  /// Choi matrix positive semidefinite within tol.
  bool is_completely_positive(double tol = 1e-9) const;

 private:
  RealMatrix entries_;
  int num_qubits_;
};

/// Pauli coefficients v_i = 2^(-n/2) Tr(S_i rho) of a density matrix.
class PtmState {
 public:
  /// Checks the unit-trace coefficient and the purity bound.
  explicit PtmState(RealVector coeffs);

  static PtmState zero_state(int num_qubits);
  static PtmState plus_state(int num_qubits);
  static PtmState maximally_mixed(int num_qubits);

  int num_qubits() const noexcept { return num_qubits_; }
  const RealVector &coeffs() const noexcept { return coeffs_; }
  /// Tr(rho^2), which equals the squared l2 norm of the coefficients.
  double purity() const { return coeffs_.squaredNorm(); }

 private:
  RealVector coeffs_;
  int num_qubits_;
};

/// Pauli coefficients v_i = 2^(-n/2) Tr(S_i M) of a Hermitian observable.
class Observable {
 public:
  explicit Observable(RealVector coeffs);

  int num_qubits() const noexcept { return num_qubits_; }
  const RealVector &coeffs() const noexcept { return coeffs_; }
  bool is_zero_bias() const noexcept { return coeffs_[0] == 0.0; }

  ComplexMatrix to_matrix() const;
  /// Largest absolute eigenvalue of the underlying operator.
  double spectral_radius() const;

 private:
  RealVector coeffs_;
  int num_qubits_;
};

/// PTM of rho -> U rho U^dagger. Throws if U is not unitary.
PtmOperator unitary_to_ptm(const ComplexMatrix &u);

/// PTM of rho -> K rho K^dagger for an arbitrary single Kraus operator.
PtmOperator operation_to_ptm(const ComplexMatrix &k);

PtmState density_to_ptm(const ComplexMatrix &rho);

/// With strict set, throws if an eigenvalue of M lies outside [-1, 1].
Observable observable_to_ptm(const ComplexMatrix &m, bool strict = false);

double expectation(const Observable &obs, const PtmState &state);
double expectation(const Observable &obs, const RealVector &state);

/**
 * A PTM acting on a subset of qubits of an n-qubit register.
 *
 * Local digit t of the small matrix refers to qubits[t]. Application costs
 * O(4^n 4^k) instead of O(16^n).
 */
class LocalMap {
 public:
  LocalMap(RealMatrix local, std::vector<int> qubits, int num_qubits);

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<int> &qubits() const noexcept { return qubits_; }
  const RealMatrix &local() const noexcept { return local_; }

  RealVector apply(const RealVector &v) const;
  RealVector apply_transpose(const RealVector &v) const;
  /// Returns M A.
  RealMatrix apply_columns(const RealMatrix &a) const;
  /// Returns M A M^T.
  RealMatrix conjugate(const RealMatrix &a) const;

  PtmOperator embed() const;

 private:
  RealVector apply_with(const RealMatrix &m, const RealVector &v) const;

  RealMatrix local_;
  std::vector<int> qubits_;
  int num_qubits_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> bases_;
};

}  // namespace qem
