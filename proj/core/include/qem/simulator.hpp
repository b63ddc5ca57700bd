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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qem/channels.hpp"
#include "qem/quasiprob.hpp"
#include "qem/random.hpp"

namespace qem {

/// A unitary gate stored by its local PTM and the qubits it touches.
class Gate {
 public:
  /// u acts on `qubits` (local qubit t is qubits[t]) of an n-qubit register.
  static Gate from_unitary(const ComplexMatrix &u, std::vector<int> qubits,
                           int num_qubits);
  /// Gate on all qubits. Requires the unitary block form.
  static Gate from_ptm(const PtmOperator &ptm);

  int num_qubits() const noexcept { return map_.num_qubits(); }
  const std::vector<int> &qubits() const noexcept { return map_.qubits(); }
  const LocalMap &local_map() const noexcept { return map_; }

  /// Dense 4^n x 4^n PTM, built on demand.
  PtmOperator ptm() const { return map_.embed(); }

  RealVector apply(const RealVector &v) const { return map_.apply(v); }
  RealVector apply_transpose(const RealVector &v) const {
    return map_.apply_transpose(v);
  }
  /// Returns G A G^T.
  RealMatrix conjugate(const RealMatrix &a) const { return map_.conjugate(a); }

 private:
  explicit Gate(LocalMap map) : map_(std::move(map)) {}

  LocalMap map_;
};

struct Step {
  Gate gate;
  std::optional<Channel> noise;
};

/// Noisy circuit: gates G_k each followed by an optional channel C_k.
class Circuit {
 public:
  Circuit(int num_qubits, std::vector<Step> steps, PtmState input,
          Observable observable);

  int num_qubits() const noexcept { return num_qubits_; }
  const std::vector<Step> &steps() const noexcept { return steps_; }
  std::size_t size() const noexcept { return steps_.size(); }
  const PtmState &input() const noexcept { return input_; }
  const Observable &observable() const noexcept { return observable_; }

  /// First `count` steps with the same input and observable.
  Circuit prefix(std::size_t count) const;

 private:
  int num_qubits_;
  std::vector<Step> steps_;
  PtmState input_;
  Observable observable_;
};

enum class EstimatorMode { noiseless, noisy, exact_qem, mc_empirical, mc_concat };

std::string_view to_string(EstimatorMode mode);

struct EstimateRecord {
  double value = 0.0;
  EstimatorMode mode = EstimatorMode::noiseless;
  std::uint64_t seed = 0;
  std::int64_t samples_used = 0;
};

/// <v_ob, prod G_k v_0>.
double run_noiseless(const Circuit &c);
/// <v_ob, prod C_k G_k v_0>.
double run_noisy(const Circuit &c);
/// Noisy circuit with C_k^-1 inserted after every channel.
double run_exact_qem(const Circuit &c);

/// Values after k steps for each k in `checkpoints` (ascending, <= size).
std::vector<double> noiseless_trajectory(const Circuit &c,
                                         std::span<const std::size_t> checkpoints);
std::vector<double> noisy_trajectory(const Circuit &c,
                                     std::span<const std::size_t> checkpoints);
std::vector<double> exact_qem_trajectory(const Circuit &c,
                                         std::span<const std::size_t> checkpoints);

/// Quasi-probability decompositions for every noisy step of a circuit.
class QemPlan {
 public:
  /// Pauli basis for Pauli channels, default single-qubit basis otherwise.
  explicit QemPlan(const Circuit &c);
  QemPlan(const Circuit &c,
          std::vector<std::optional<QuasiProbDecomposition>> decomps);

  const Circuit &circuit() const noexcept { return circuit_; }
  const std::optional<QuasiProbDecomposition> &decomposition(
      std::size_t k) const {
    return decomps_.at(k);
  }
  /// prod_k norm1_k over the first `steps` steps.
  double norm1_product(std::size_t steps) const;

 private:
  Circuit circuit_;
  std::vector<std::optional<QuasiProbDecomposition>> decomps_;
};

/**
 * Monte Carlo QEM with per-gate empirical frequencies.
 *
 * Step k draws from the stream derive(id.seed, id.trial, k).
 */
EstimateRecord run_mc_qem_empirical(const Circuit &c, std::int64_t ns,
                                    StreamId id);
std::vector<double> mc_empirical_trajectory(
    const QemPlan &plan, std::int64_t ns, StreamId id,
    std::span<const std::size_t> checkpoints);

struct ConcatOptions {
  /// Upper limit on N = round(Ns prod norm1^2).
  std::int64_t max_samples = std::int64_t{1} << 40;
};

/**
 * Monte Carlo QEM averaging N whole-circuit samples, each with one sampled
 * operation per gate.
 *
 * Most samples draw the most probable operation at every gate. Per gate, the
 * set of samples that deviate is drawn as Binomial(N, 1 - p_max) distinct
 * positions, and only those samples are propagated explicitly. The estimator
 * and its distribution are those of independent per-sample draws.
 */
class ConcatSampler {
 public:
  ConcatSampler(const QemPlan &plan, std::int64_t ns, ConcatOptions options = {});

  std::int64_t samples() const noexcept { return samples_; }
  EstimateRecord sample(StreamId id) const;

 private:
  const QemPlan *plan_;
  std::int64_t samples_;
  double scale_;
  std::vector<std::size_t> dominant_;
  std::vector<double> deviate_prob_;
  std::vector<std::vector<std::size_t>> deviate_index_;
  std::vector<std::vector<double>> deviate_cdf_;
  std::vector<RealVector> forward_;
  std::vector<RealVector> backward_;
  double base_sign_;

  RealVector step(std::size_t k, std::size_t op, const RealVector &v) const;
};

EstimateRecord run_mc_qem_concat(const Circuit &c, std::int64_t ns, StreamId id,
                                 ConcatOptions options = {});

/// Mean, second moment and covariance of the random PTM state.
struct MomentState {
  RealVector mu;
  RealMatrix second_moment;
  RealMatrix covariance;
  std::size_t k = 0;
};

struct MomentOptions {
  /// Steps after which to record the RMSE.
  std::vector<std::size_t> checkpoints;
  /// Called after every step.
  std::function<void(const MomentState &)> on_step;
};

struct MomentResult {
  MomentState state;
  double rmse = 0.0;
  std::vector<double> rmse_at_checkpoints;
};

/// sqrt(v_ob^T (A - mu mu^T) v_ob).
double moment_rmse(const MomentState &state, const Observable &obs);

/// A_k = (1 1^T + Xi_k) .* (G_k A_{k-1} G_k^T). Throws on a general channel.
MomentResult moment_recursion_pauli(const Circuit &c, std::int64_t ns,
                                    const MomentOptions &options = {});

/**
 * A_k = sum_ij E_ij O_i C_k G_k A_{k-1} G_k^T C_k^T O_j^T with
 * E = E{alpha~ alpha~^T}.
 */
MomentResult moment_recursion_general(
    const Circuit &c, std::int64_t ns,
    const std::vector<std::optional<QuasiProbDecomposition>> &decomps,
    const MomentOptions &options = {});
MomentResult moment_recursion_general(const Circuit &c, std::int64_t ns,
                                      const MomentOptions &options = {});

/// v_ob^T (2^-n I - diag(v)^2) v_ob for term-wise Pauli measurement.
/// Requires a zero-bias observable with spectral radius <= 1.
double intrinsic_variance(const Observable &obs, const PtmState &state);

/// bias^2 + variance / Ns.
double shot_limited_mse(double bias, double variance, std::int64_t ns);

}  // namespace qem
