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

#include <cstdint>
#include <span>
#include <vector>

#include "qem/channels.hpp"
#include "qem/random.hpp"

namespace qem {

/**
 * Finite set of implementable operations O_l.
 *
 * The Pauli basis is kept implicit: O_l is the diagonal PTM whose entries are
 * column l of the Walsh matrix.
 */
class OperationBasis {
 public:
  static OperationBasis pauli(int num_qubits);
  explicit OperationBasis(std::vector<PtmOperator> ops);

  std::size_t size() const noexcept { return size_; }
  int num_qubits() const noexcept { return num_qubits_; }
  bool is_pauli() const noexcept { return ops_.empty(); }
  bool all_trace_preserving() const noexcept { return trace_preserving_; }

  PtmOperator op(std::size_t l) const;
  /// Returns O_l v.
  RealVector apply(std::size_t l, const RealVector &v) const;
  /// Returns O_l^T v.
  RealVector apply_transpose(std::size_t l, const RealVector &v) const;
  /// Returns sum_l w_l O_l as a dense matrix.
  RealMatrix combine(const RealVector &weights) const;

 private:
  OperationBasis(int num_qubits, std::size_t size);

  std::vector<PtmOperator> ops_;
  std::size_t size_ = 0;
  int num_qubits_ = 0;
  bool trace_preserving_ = true;
};

/// Signed weights alpha with alpha_l = norm1 * signs_l * sampling_probs_l.
class QuasiProbDecomposition {
 public:
  QuasiProbDecomposition(RealVector alpha, OperationBasis basis);

  const RealVector &alpha() const noexcept { return alpha_; }
  const RealVector &sampling_probs() const noexcept { return probs_; }
  /// Entries are +1 or -1. Zero weights carry sign +1.
  const RealVector &signs() const noexcept { return signs_; }
  double norm1() const noexcept { return norm1_; }
  const OperationBasis &basis() const noexcept { return basis_; }
  /// Indices with nonzero sampling probability, ascending.
  const std::vector<std::size_t> &support() const noexcept { return support_; }

  /// sum_l alpha_l O_l.
  RealMatrix reconstruct() const { return basis_.combine(alpha_); }

 private:
  RealVector alpha_;
  RealVector probs_;
  RealVector signs_;
  double norm1_ = 0.0;
  OperationBasis basis_;
  std::vector<std::size_t> support_;
};

/// Empirical frequencies from N_k multinomial draws.
struct EmpiricalDecomposition {
  RealVector freq;
  RealVector alpha_tilde;
  std::int64_t draws = 0;
};

QuasiProbDecomposition invert_pauli(const PauliChannel &ch);

/// Solves sum_l alpha_l O_l = C^-1. Throws on rank deficiency or singular C.
QuasiProbDecomposition invert_general(const GeneralChannel &ch,
                                      const OperationBasis &basis);
QuasiProbDecomposition invert_general(const GeneralChannel &ch,
                                      std::vector<PtmOperator> basis);

/**
 * Sixteen single-qubit operations spanning the 16-dim PTM space: the Pauli
 * gates, rotations (I + i s)/sqrt(2) about X, Y, Z, the gates (s_a + s_b)/sqrt(2)
 * about the YZ, ZX, XY diagonals, the projectors (I + s)/2, and the
 * measure-and-prepare maps (s_a + i s_b)/2. Each acts as rho -> K rho K^dagger.
 */
std::vector<PtmOperator> default_single_qubit_basis();

/// Decomposition for any channel: Pauli basis for Pauli channels, otherwise
/// the default single-qubit basis (single-qubit channels only).
QuasiProbDecomposition invert_channel(const Channel &ch);

/// norm1^2.
double sampling_overhead_factor(const QuasiProbDecomposition &d);

/// Largest value total_overhead_exact will return.
inline constexpr std::int64_t kMaxOverheadSamples = std::int64_t{1} << 62;

/// N0 (prod norm1^2 - 1), rounded to nearest. Throws std::overflow_error
/// above kMaxOverheadSamples.
std::int64_t total_overhead_exact(std::int64_t n0,
                                  std::span<const QuasiProbDecomposition> decomps);

/// N_k = max(1, round(Ns norm1^2)).
std::int64_t draw_count(const QuasiProbDecomposition &d, std::int64_t ns);

EmpiricalDecomposition draw_empirical(const QuasiProbDecomposition &d,
                                      std::int64_t ns, Rng &rng);

/// c~ = (W alpha~) .* c.
RealVector residual_channel_pauli(const QuasiProbDecomposition &d,
                                  const EmpiricalDecomposition &emp,
                                  const PauliChannel &ch);

/**
 * E{alpha~ alpha~^T} = alpha alpha^T (1 - 1/N_k) + (norm1^2 / N_k) diag(p).
 *
 * The signs enter through alpha; the diagonal term is sign free.
 */
RealMatrix alpha_second_moment(const QuasiProbDecomposition &d, std::int64_t ns);

/**
 * Covariance of c~:
 * (1/N_k) [norm1^2 (W diag(p) W) .* c c^T - 1 1^T].
 */
RealMatrix residual_covariance(const QuasiProbDecomposition &d,
                               const PauliChannel &ch, std::int64_t ns);

}  // namespace qem
