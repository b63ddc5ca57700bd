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
#include <string_view>
#include <vector>

#include "qem/simulator.hpp"

namespace qem {

/// Noise attached after a two-qubit gate.
enum class TwoQubitNoise {
  per_qubit,    // one depolarizing channel on each touched qubit
  first_qubit,  // a single depolarizing channel on the first touched qubit
};

std::string_view to_string(TwoQubitNoise mode);
TwoQubitNoise two_qubit_noise_from_string(std::string_view s);

struct QaoaOptions {
  double eps = 3e-4;
  TwoQubitNoise two_qubit_noise = TwoQubitNoise::per_qubit;
};

/// Gate order and noise support of one stage.
struct QaoaLayout {
  struct Term {
    std::vector<int> qubits;  // one qubit for Z, two for ZZ, one for the mixer
    double weight;            // operator weight; 1 for the mixer
    bool mixer;
  };
  std::vector<Term> terms;
  std::vector<std::vector<int>> noisy_qubits;

  std::size_t gates_per_stage() const { return terms.size(); }
};

/// ZZ terms (i < j, lexicographic), Z terms, then an X rotation per qubit.
/// Throws unless the observable contains only Z and ZZ terms.
QaoaLayout qaoa_layout(const Observable &obs, const QaoaOptions &options = {});

/**
 * |+>^n followed by P stages exp(-i beta_k B) exp(-i gamma_k H) with
 * gamma_k = k/P and beta_k = 1 - k/P. Every gate is followed by depolarizing
 * noise on its noisy qubits.
 */
Circuit build_qaoa_circuit(const Observable &obs, int stages, int num_qubits,
                           const QaoaOptions &options = {});

/**
 * Greedy layer count: a layer closes once every qubit has been hit.
 * Entry k is the number of closed layers after the first k+1 steps.
 */
std::vector<std::size_t> complete_layer_counts(
    const std::vector<std::vector<int>> &touched, int num_qubits);

}  // namespace qem
