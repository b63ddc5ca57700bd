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

#include "qem/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qem {

namespace {

template <class StepFn>
std::vector<double> run_with_checkpoints(const Circuit &c,
                                         std::span<const std::size_t> checkpoints,
                                         StepFn &&step) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] > c.size() || (i > 0 && checkpoints[i] < checkpoints[i - 1])) {
      throw std::invalid_argument(
          "checkpoints must be ascending and within the circuit length");
    }
  }
  std::vector<double> out;
  out.reserve(checkpoints.size());
  const RealVector &obs = c.observable().coeffs();
  RealVector v = c.input().coeffs();
  std::size_t next = 0;
  while (next < checkpoints.size() && checkpoints[next] == 0) {
    out.push_back(obs.dot(v));
    ++next;
  }
  for (std::size_t k = 0; next < checkpoints.size(); ++k) {
    v = step(k, v);
    while (next < checkpoints.size() && checkpoints[next] == k + 1) {
      out.push_back(obs.dot(v));
      ++next;
    }
  }
  return out;
}

std::vector<std::size_t> final_checkpoint(const Circuit &c) {
  return {c.size()};
}

RealVector apply_inverse_channel(const Channel &ch, const RealVector &v) {
  if (const auto *p = std::get_if<PauliChannel>(&ch)) {
    if (p->diag().cwiseAbs().minCoeff() < 1e-12) {
      throw std::invalid_argument("run_exact_qem: channel is not invertible");
    }
    return v.cwiseQuotient(p->diag());
  }
  const auto &g = std::get<GeneralChannel>(ch);
  const Eigen::FullPivLU<RealMatrix> lu(g.ptm().matrix());
  if (!lu.isInvertible()) {
    throw std::invalid_argument("run_exact_qem: channel is not invertible");
  }
  return lu.solve(v);
}

}  // namespace

Gate Gate::from_unitary(const ComplexMatrix &u, std::vector<int> qubits,
                        int num_qubits) {
  if (u.rows() != (Eigen::Index{1} << qubits.size())) {
    throw std::invalid_argument("Gate: unitary size does not match support");
  }
  return Gate(
      LocalMap(unitary_to_ptm(u).matrix(), std::move(qubits), num_qubits));
}

Gate Gate::from_ptm(const PtmOperator &ptm) {
  if (!ptm.is_unitary_block()) {
    throw std::invalid_argument("Gate: PTM is not a unitary block");
  }
  std::vector<int> all(static_cast<std::size_t>(ptm.num_qubits()));
  for (int q = 0; q < ptm.num_qubits(); ++q) all[q] = q;
  return Gate(LocalMap(ptm.matrix(), std::move(all), ptm.num_qubits()));
}

Circuit::Circuit(int num_qubits, std::vector<Step> steps, PtmState input,
                 Observable observable)
    : num_qubits_(num_qubits),
      steps_(std::move(steps)),
      input_(std::move(input)),
      observable_(std::move(observable)) {
  if (input_.num_qubits() != num_qubits_ ||
      observable_.num_qubits() != num_qubits_) {
    throw std::invalid_argument("Circuit: input/observable qubit mismatch");
  }
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    const Step &s = steps_[k];
    if (s.gate.num_qubits() != num_qubits_ ||
        (s.noise && channel_qubits(*s.noise) != num_qubits_)) {
      throw std::invalid_argument("Circuit: step " + std::to_string(k) +
                                  " has the wrong qubit count");
    }
  }
}

Circuit Circuit::prefix(std::size_t count) const {
  if (count > steps_.size()) throw std::out_of_range("Circuit::prefix");
  return Circuit(num_qubits_,
                 std::vector<Step>(steps_.begin(),
                                   steps_.begin() + static_cast<long>(count)),
                 input_, observable_);
}

std::string_view to_string(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::noiseless: return "noiseless";
    case EstimatorMode::noisy: return "noisy";
    case EstimatorMode::exact_qem: return "exact_qem";
    case EstimatorMode::mc_empirical: return "mc_empirical";
    case EstimatorMode::mc_concat: return "mc_concat";
  }
  return "unknown";
}

std::vector<double> noiseless_trajectory(
    const Circuit &c, std::span<const std::size_t> checkpoints) {
  return run_with_checkpoints(c, checkpoints,
                              [&](std::size_t k, const RealVector &v) {
                                return c.steps()[k].gate.apply(v);
                              });
}

std::vector<double> noisy_trajectory(const Circuit &c,
                                     std::span<const std::size_t> checkpoints) {
  return run_with_checkpoints(
      c, checkpoints, [&](std::size_t k, const RealVector &v) {
        const Step &s = c.steps()[k];
        RealVector w = s.gate.apply(v);
        return s.noise ? apply_channel(*s.noise, w) : w;
      });
}

std::vector<double> exact_qem_trajectory(
    const Circuit &c, std::span<const std::size_t> checkpoints) {
  return run_with_checkpoints(
      c, checkpoints, [&](std::size_t k, const RealVector &v) {
        const Step &s = c.steps()[k];
        RealVector w = s.gate.apply(v);
        if (!s.noise) return w;
        return apply_inverse_channel(*s.noise, apply_channel(*s.noise, w));
      });
}

double run_noiseless(const Circuit &c) {
  return noiseless_trajectory(c, final_checkpoint(c)).front();
}

double run_noisy(const Circuit &c) {
  return noisy_trajectory(c, final_checkpoint(c)).front();
}

double run_exact_qem(const Circuit &c) {
  return exact_qem_trajectory(c, final_checkpoint(c)).front();
}

QemPlan::QemPlan(const Circuit &c) : circuit_(c) {
  decomps_.reserve(c.size());
  for (const Step &s : c.steps()) {
    if (s.noise) {
      decomps_.emplace_back(invert_channel(*s.noise));
    } else {
      decomps_.emplace_back(std::nullopt);
    }
  }
}

QemPlan::QemPlan(const Circuit &c,
                 std::vector<std::optional<QuasiProbDecomposition>> decomps)
    : circuit_(c), decomps_(std::move(decomps)) {
  if (decomps_.size() != c.size()) {
    throw std::invalid_argument("QemPlan: one decomposition per step required");
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    const bool noisy = c.steps()[k].noise.has_value();
    if (noisy != decomps_[k].has_value()) {
      throw std::invalid_argument("QemPlan: decomposition/noise mismatch at step " +
                                  std::to_string(k));
    }
    if (decomps_[k] && decomps_[k]->basis().num_qubits() != c.num_qubits()) {
      throw std::invalid_argument("QemPlan: basis qubit count mismatch");
    }
  }
}

double QemPlan::norm1_product(std::size_t steps) const {
  double p = 1.0;
  for (std::size_t k = 0; k < steps && k < decomps_.size(); ++k) {
    if (decomps_[k]) p *= decomps_[k]->norm1();
  }
  return p;
}

std::vector<double> mc_empirical_trajectory(
    const QemPlan &plan, std::int64_t ns, StreamId id,
    std::span<const std::size_t> checkpoints) {
  if (ns < 1) throw std::invalid_argument("mc_empirical: Ns < 1");
  const Circuit &c = plan.circuit();
  const int n = c.num_qubits();
  return run_with_checkpoints(
      c, checkpoints, [&](std::size_t k, const RealVector &v) {
        const Step &s = c.steps()[k];
        RealVector w = s.gate.apply(v);
        if (!s.noise) return w;
        const QuasiProbDecomposition &d = *plan.decomposition(k);
        Rng rng = make_stream(id.seed, id.trial, k);
        const EmpiricalDecomposition emp = draw_empirical(d, ns, rng);
        if (const auto *p = std::get_if<PauliChannel>(&*s.noise);
            p != nullptr && d.basis().is_pauli()) {
          const RealVector residual =
              walsh_transform(emp.alpha_tilde, n).cwiseProduct(p->diag());
          return RealVector(residual.cwiseProduct(w));
        }
        return RealVector(d.basis().combine(emp.alpha_tilde) *
                          apply_channel(*s.noise, w));
      });
}

EstimateRecord run_mc_qem_empirical(const Circuit &c, std::int64_t ns,
                                    StreamId id) {
  const QemPlan plan(c);
  const std::vector<std::size_t> last = final_checkpoint(c);
  EstimateRecord r;
  r.value = mc_empirical_trajectory(plan, ns, id, last).front();
  r.mode = EstimatorMode::mc_empirical;
  r.seed = id.seed;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (const auto &d = plan.decomposition(k)) r.samples_used += draw_count(*d, ns);
  }
  return r;
}

double intrinsic_variance(const Observable &obs, const PtmState &state) {
  if (obs.num_qubits() != state.num_qubits()) {
    throw std::invalid_argument("intrinsic_variance: dimension mismatch");
  }
  if (!obs.is_zero_bias()) {
    throw std::invalid_argument("intrinsic_variance: observable has an identity term");
  }
  if (obs.spectral_radius() > 1.0 + kMatrixTolerance) {
    throw std::invalid_argument("intrinsic_variance: eigenvalue outside [-1, 1]");
  }
  const double base = std::pow(2.0, -state.num_qubits());
  const RealVector &o = obs.coeffs();
  const RealVector &v = state.coeffs();
  double var = 0.0;
  for (Eigen::Index i = 0; i < o.size(); ++i) {
    var += o[i] * o[i] * (base - v[i] * v[i]);
  }
  return std::max(0.0, var);
}

double shot_limited_mse(double bias, double variance, std::int64_t ns) {
  if (ns < 1) throw std::invalid_argument("shot_limited_mse: Ns < 1");
  return bias * bias + variance / static_cast<double>(ns);
}

}  // namespace qem
