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

#include "qem/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qem {

namespace {

using Complex = std::complex<double>;

ComplexMatrix z_rotation(double angle) {
  ComplexMatrix u = ComplexMatrix::Zero(2, 2);
  u(0, 0) = std::exp(Complex(0.0, -angle));
  u(1, 1) = std::exp(Complex(0.0, angle));
  return u;
}

ComplexMatrix zz_rotation(double angle) {
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  for (int b = 0; b < 4; ++b) {
    const double parity = ((b & 1) ^ (b >> 1)) != 0 ? -1.0 : 1.0;
    u(b, b) = std::exp(Complex(0.0, -angle * parity));
  }
  return u;
}

ComplexMatrix x_rotation(double angle) {
  ComplexMatrix u(2, 2);
  u << std::cos(angle), Complex(0.0, -std::sin(angle)),
      Complex(0.0, -std::sin(angle)), std::cos(angle);
  return u;
}

std::optional<Channel> noise_on(const std::vector<int> &qubits, int n,
                                double eps) {
  const PauliChannel one = depolarizing(eps);
  PauliChannel out = PauliChannel::identity(n);
  for (int q : qubits) out = compose(out, lift_single_qubit(one, q, n));
  return Channel(std::move(out));
}

}  // namespace

std::string_view to_string(TwoQubitNoise mode) {
  return mode == TwoQubitNoise::per_qubit ? "per_qubit" : "first_qubit";
}

TwoQubitNoise two_qubit_noise_from_string(std::string_view s) {
  if (s == "per_qubit" || s == "per-qubit") return TwoQubitNoise::per_qubit;
  if (s == "first_qubit" || s == "first-qubit") return TwoQubitNoise::first_qubit;
  throw std::invalid_argument("unknown two-qubit noise mode: " + std::string(s));
}

QaoaLayout qaoa_layout(const Observable &obs, const QaoaOptions &options) {
  const int n = obs.num_qubits();
  const RealVector &v = obs.coeffs();
  const double scale = std::pow(2.0, -0.5 * n);
  QaoaLayout layout;
  std::vector<QaoaLayout::Term> singles;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    std::vector<int> zs;
    for (int q = 0; q < n; ++q) {
      const auto d = static_cast<Pauli>((i >> (2 * q)) & 3);
      if (d == Pauli::Z) {
        zs.push_back(q);
      } else if (d != Pauli::I) {
        throw std::invalid_argument("qaoa_layout: observable has a non-Z term");
      }
    }
    if (zs.size() > 2) {
      throw std::invalid_argument("qaoa_layout: observable has a term above ZZ");
    }
    QaoaLayout::Term t{zs, scale * v[i], false};
    if (zs.size() == 2) {
      layout.terms.push_back(std::move(t));
    } else {
      singles.push_back(std::move(t));
    }
  }
  if (v[0] != 0.0) {
    throw std::invalid_argument("qaoa_layout: observable has an identity term");
  }
  std::sort(layout.terms.begin(), layout.terms.end(),
            [](const auto &a, const auto &b) { return a.qubits < b.qubits; });
  std::sort(singles.begin(), singles.end(),
            [](const auto &a, const auto &b) { return a.qubits < b.qubits; });
  for (auto &t : singles) layout.terms.push_back(std::move(t));
  for (int q = 0; q < n; ++q) layout.terms.push_back({{q}, 1.0, true});

  for (const auto &t : layout.terms) {
    if (t.qubits.size() == 2 &&
        options.two_qubit_noise == TwoQubitNoise::first_qubit) {
      layout.noisy_qubits.push_back({t.qubits.front()});
    } else {
      layout.noisy_qubits.push_back(t.qubits);
    }
  }
  return layout;
}

Circuit build_qaoa_circuit(const Observable &obs, int stages, int num_qubits,
                           const QaoaOptions &options) {
  if (stages < 0) throw std::invalid_argument("build_qaoa_circuit: P < 0");
  if (obs.num_qubits() != num_qubits) {
    throw std::invalid_argument("build_qaoa_circuit: qubit count mismatch");
  }
  const QaoaLayout layout = qaoa_layout(obs, options);
  std::vector<std::optional<Channel>> noise;
  for (const auto &qs : layout.noisy_qubits) {
    noise.push_back(noise_on(qs, num_qubits, options.eps));
  }
  std::vector<Step> steps;
  steps.reserve(layout.gates_per_stage() * static_cast<std::size_t>(stages));
  for (int k = 1; k <= stages; ++k) {
    const double gamma = static_cast<double>(k) / stages;
    const double beta = 1.0 - gamma;
    for (std::size_t t = 0; t < layout.terms.size(); ++t) {
      const auto &term = layout.terms[t];
      ComplexMatrix u;
      if (term.mixer) {
        u = x_rotation(beta);
      } else if (term.qubits.size() == 2) {
        u = zz_rotation(gamma * term.weight);
      } else {
        u = z_rotation(gamma * term.weight);
      }
      steps.push_back(
          {Gate::from_unitary(u, term.qubits, num_qubits), noise[t]});
    }
  }
  return Circuit(num_qubits, std::move(steps), PtmState::plus_state(num_qubits),
                 obs);
}

std::vector<std::size_t> complete_layer_counts(
    const std::vector<std::vector<int>> &touched, int num_qubits) {
  std::vector<std::size_t> out;
  out.reserve(touched.size());
  std::vector<bool> hit(static_cast<std::size_t>(num_qubits), false);
  int remaining = num_qubits;
  std::size_t layers = 0;
  for (const auto &qs : touched) {
    for (int q : qs) {
      if (q < 0 || q >= num_qubits) {
        throw std::invalid_argument("complete_layer_counts: qubit out of range");
      }
      if (!hit[static_cast<std::size_t>(q)]) {
        hit[static_cast<std::size_t>(q)] = true;
        --remaining;
      }
    }
    if (remaining == 0) {
      ++layers;
      hit.assign(hit.size(), false);
      remaining = num_qubits;
    }
    out.push_back(layers);
  }
  return out;
}

}  // namespace qem
