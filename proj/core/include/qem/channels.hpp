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

#include <variant>

#include "qem/pauli.hpp"

namespace qem {

/**
 * Pauli channel rho -> sum_k p_k S_k rho S_k.
 *
 * Its PTM is diagonal with diag = W probs.
 */
class PauliChannel {
 public:
  /// Validates the distribution and computes the diagonal.
  explicit PauliChannel(RealVector probs);

  static PauliChannel identity(int num_qubits);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept {
    return static_cast<std::size_t>(probs_.size());
  }
  const RealVector &probs() const noexcept { return probs_; }
  const RealVector &diag() const noexcept { return diag_; }

  PtmOperator ptm() const;
  bool is_identity() const { return probs_[0] == 1.0; }

 private:
  RealVector probs_;
  RealVector diag_;
  int num_qubits_;
};

/// Channel with a dense, generally non-diagonal PTM.
class GeneralChannel {
 public:
  /// Requires trace preservation and complete positivity.
  explicit GeneralChannel(PtmOperator ptm);

  int num_qubits() const noexcept { return ptm_.num_qubits(); }
  const PtmOperator &ptm() const noexcept { return ptm_; }

 private:
  PtmOperator ptm_;
};

using Channel = std::variant<PauliChannel, GeneralChannel>;

PauliChannel pauli_channel(RealVector probs);

/// Single-qubit depolarizing channel, probs = [1-eps, eps/3, eps/3, eps/3].
PauliChannel depolarizing(double eps);

/// Single-qubit amplitude damping with damping probability gamma.
GeneralChannel amplitude_damping(double gamma);

/// 1 - 4^(-n) Tr C.
double gate_error_probability(const PauliChannel &ch);
double gate_error_probability(const GeneralChannel &ch);
double gate_error_probability(const Channel &ch);

PauliChannel lift_single_qubit(const PauliChannel &ch, int qubit, int num_qubits);
GeneralChannel lift_single_qubit(const GeneralChannel &ch, int qubit,
                                 int num_qubits);
Channel lift_single_qubit(const Channel &ch, int qubit, int num_qubits);

/// Channel applying `first` then `second`; probabilities XOR-convolve.
PauliChannel compose(const PauliChannel &first, const PauliChannel &second);

int channel_qubits(const Channel &ch);
PtmOperator channel_ptm(const Channel &ch);

/// Returns C v.
RealVector apply_channel(const Channel &ch, const RealVector &v);

/// Returns C G v.
PtmState apply_noisy_gate(const Channel &ch, const PtmOperator &gate,
                          const PtmState &state);

}  // namespace qem
