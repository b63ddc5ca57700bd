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

#include "qem/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qem {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_lift_args(int source_qubits, int qubit, int num_qubits) {
  if (source_qubits != 1) {
    throw std::invalid_argument("lift_single_qubit: channel is not single-qubit");
  }
  if (qubit < 0 || qubit >= num_qubits) {
    throw std::out_of_range("lift_single_qubit: qubit " +
                            std::to_string(qubit) + " out of range");
  }
}

}  // namespace

PauliChannel::PauliChannel(RealVector probs) : probs_(std::move(probs)) {
  num_qubits_ =
      qubits_from_pauli_dimension(static_cast<std::size_t>(probs_.size()));
  if (probs_.minCoeff() < 0.0) {
    throw std::invalid_argument("PauliChannel: negative probability");
  }
  if (std::abs(probs_.sum() - 1.0) > kProbabilityTolerance) {
    throw std::invalid_argument("PauliChannel: probabilities do not sum to 1");
  }
  diag_ = walsh_transform(probs_, num_qubits_);
  diag_[0] = 1.0;
}

PauliChannel PauliChannel::identity(int num_qubits) {
  RealVector p =
      RealVector::Zero(static_cast<Eigen::Index>(pauli_dimension(num_qubits)));
  p[0] = 1.0;
  return PauliChannel(std::move(p));
}

PtmOperator PauliChannel::ptm() const {
  return PtmOperator(RealMatrix(diag_.asDiagonal()));
}

GeneralChannel::GeneralChannel(PtmOperator ptm) : ptm_(std::move(ptm)) {
  if (!ptm_.is_trace_preserving()) {
    throw std::invalid_argument("GeneralChannel: not trace preserving");
  }
  if (!ptm_.is_completely_positive()) {
    throw std::invalid_argument("GeneralChannel: not completely positive");
  }
}

PauliChannel pauli_channel(RealVector probs) {
  return PauliChannel(std::move(probs));
}

PauliChannel depolarizing(double eps) {
  if (!(eps >= 0.0 && eps < 0.75)) {
    throw std::invalid_argument("depolarizing: eps must lie in [0, 3/4)");
  }
  RealVector p(4);
  p << 1.0 - eps, eps / 3.0, eps / 3.0, eps / 3.0;
  return PauliChannel(std::move(p));
}

GeneralChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("amplitude_damping: gamma must lie in [0, 1]");
  }
  const double s = std::sqrt(1.0 - gamma);
  RealMatrix m(4, 4);
  m << 1, 0, 0, 0,
       0, s, 0, 0,
       0, 0, s, 0,
       gamma, 0, 0, 1.0 - gamma;
  return GeneralChannel(PtmOperator(std::move(m)));
}

double gate_error_probability(const PauliChannel &ch) {
  return 1.0 - ch.diag().sum() / static_cast<double>(ch.dimension());
}

double gate_error_probability(const GeneralChannel &ch) {
  return 1.0 - ch.ptm().matrix().trace() /
                   static_cast<double>(ch.ptm().dimension());
}

double gate_error_probability(const Channel &ch) {
  return std::visit([](const auto &c) { return gate_error_probability(c); },
                    ch);
}

PauliChannel lift_single_qubit(const PauliChannel &ch, int qubit,
                               int num_qubits) {
  check_lift_args(ch.num_qubits(), qubit, num_qubits);
  RealVector p =
      RealVector::Zero(static_cast<Eigen::Index>(pauli_dimension(num_qubits)));
  for (Eigen::Index d = 0; d < 4; ++d) {
    p[d << (2 * qubit)] = ch.probs()[d];
  }
  return PauliChannel(std::move(p));
}

GeneralChannel lift_single_qubit(const GeneralChannel &ch, int qubit,
                                 int num_qubits) {
  check_lift_args(ch.num_qubits(), qubit, num_qubits);
  return GeneralChannel(
      LocalMap(ch.ptm().matrix(), {qubit}, num_qubits).embed());
}

Channel lift_single_qubit(const Channel &ch, int qubit, int num_qubits) {
  return std::visit(
      [&](const auto &c) -> Channel {
        return lift_single_qubit(c, qubit, num_qubits);
      },
      ch);
}

PauliChannel compose(const PauliChannel &first, const PauliChannel &second) {
  if (first.num_qubits() != second.num_qubits()) {
    throw std::invalid_argument("compose: qubit count mismatch");
  }
  const auto dim = static_cast<Eigen::Index>(first.dimension());
  RealVector p = RealVector::Zero(dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (first.probs()[a] == 0.0) continue;
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (second.probs()[b] == 0.0) continue;
      p[a ^ b] += first.probs()[a] * second.probs()[b];
    }
  }
  return PauliChannel(std::move(p));
}

int channel_qubits(const Channel &ch) {
  return std::visit([](const auto &c) { return c.num_qubits(); }, ch);
}

PtmOperator channel_ptm(const Channel &ch) {
  return std::visit(Overloaded{
                        [](const PauliChannel &c) { return c.ptm(); },
                        [](const GeneralChannel &c) { return c.ptm(); },
                    },
                    ch);
}

RealVector apply_channel(const Channel &ch, const RealVector &v) {
  return std::visit(
      Overloaded{
          [&](const PauliChannel &c) -> RealVector {
            if (c.diag().size() != v.size()) {
              throw std::invalid_argument("apply_channel: dimension mismatch");
            }
            return c.diag().cwiseProduct(v);
          },
          [&](const GeneralChannel &c) -> RealVector {
            if (c.ptm().matrix().cols() != v.size()) {
              throw std::invalid_argument("apply_channel: dimension mismatch");
            }
            return c.ptm().matrix() * v;
          },
      },
      ch);
}

PtmState apply_noisy_gate(const Channel &ch, const PtmOperator &gate,
                          const PtmState &state) {
  if (gate.num_qubits() != state.num_qubits() ||
      channel_qubits(ch) != state.num_qubits()) {
    throw std::invalid_argument("apply_noisy_gate: dimension mismatch");
  }
  return PtmState(apply_channel(ch, gate.matrix() * state.coeffs()));
}

}  // namespace qem
