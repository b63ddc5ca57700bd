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


#include <benchmark/benchmark.h>

#include "qem/experiments.hpp"
#include "qem/mud.hpp"
#include "qem/qaoa.hpp"

namespace {

using namespace qem;

void BM_WalshTransform(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const RealVector x = RealVector::LinSpaced(static_cast<Eigen::Index>(pauli_dimension(n)), -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(walsh_transform(x, n));
}
BENCHMARK(BM_WalshTransform)->DenseRange(1, 6);

Observable mud_observable() {
  return build_mud_observable(experiment_mud_instance(default_config(Experiment::qaoa_mud)));
}

void BM_GateConjugate(benchmark::State &state) {
  const int n = 4;
  const Gate g = Gate::from_unitary(rx_unitary(0.3), {static_cast<int>(state.range(0))}, n);
  const auto dim = static_cast<Eigen::Index>(pauli_dimension(n));
  const RealMatrix cov = RealMatrix::Identity(dim, dim);
  for (auto _ : state) benchmark::DoNotOptimize(g.conjugate(cov));
}
BENCHMARK(BM_GateConjugate)->Arg(0)->Arg(3);

void BM_MomentRecursionQaoa(benchmark::State &state) {
  const Circuit c = build_qaoa_circuit(mud_observable(), static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(moment_recursion_pauli(c, 5000).rmse);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_MomentRecursionQaoa)->Arg(1)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_MomentRecursionAmpDamp(benchmark::State &state) {
  const Circuit c = repeated_gate_circuit(pauli_x_unitary(), Channel(amplitude_damping(1e-3)),
                                          static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(moment_recursion_general(c, 5000).rmse);
}
BENCHMARK(BM_MomentRecursionAmpDamp)->Arg(100);

void BM_EmpiricalTrial(benchmark::State &state) {
  const Circuit c = repeated_gate_circuit(pauli_x_unitary(), Channel(depolarizing(1e-3)),
                                          static_cast<std::size_t>(state.range(0)));
  const QemPlan plan(c);
  const std::size_t last[] = {c.size()};
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_empirical_trajectory(plan, 5000, {1, t++}, last));
  }
}
BENCHMARK(BM_EmpiricalTrial)->Arg(100)->Arg(1000);

void BM_EmpiricalTrialQaoa(benchmark::State &state) {
  const Circuit c = build_qaoa_circuit(mud_observable(), 9, 4);
  const QemPlan plan(c);
  const std::size_t last[] = {c.size()};
  std::uint64_t t = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_empirical_trajectory(plan, 5000, {1, t++}, last));
  }
}
BENCHMARK(BM_EmpiricalTrialQaoa);

void BM_ConcatSample(benchmark::State &state) {
  const Circuit c = repeated_gate_circuit(pauli_x_unitary(), Channel(depolarizing(1e-3)),
                                          static_cast<std::size_t>(state.range(0)));
  const QemPlan plan(c);
  const ConcatSampler sampler(plan, 5000);
  std::uint64_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample({1, t++}).value);
}
BENCHMARK(BM_ConcatSample)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
