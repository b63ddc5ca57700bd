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
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "qem/config.hpp"
#include "qem/mud.hpp"
#include "qem/simulator.hpp"
#include "qem/table.hpp"

namespace qem {

ComplexMatrix pauli_x_unitary();
/// exp(-i theta X / 2).
ComplexMatrix rx_unitary(double theta);

/// |0> input, Z observable, `count` copies of u each followed by `noise`.
Circuit repeated_gate_circuit(const ComplexMatrix &u,
                              const std::optional<Channel> &noise,
                              std::size_t count);

struct RmseStats {
  double rmse = 0.0;
  double se = 0.0;  // standard error of rmse by the delta method
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t trials = 0;
};

/// Statistics of values around `truth`, reduced in index order.
RmseStats rmse_stats(std::span<const double> values, double truth);

/// Runs fn(t) for every trial on worker_count() threads; results by index.
std::vector<std::vector<double>> run_trials(
    std::size_t trials, const std::function<std::vector<double>(std::size_t)> &fn);

/// Experiment defaults: eps 3e-4 for qaoa_mud, 1e-3 elsewhere.
ExperimentConfig default_config(Experiment e);

struct ExperimentResult {
  std::vector<Table> tables;
  nlohmann::json details;
};

ExperimentResult exp_bloch_x(const ExperimentConfig &cfg);
ExperimentResult exp_bloch_rx(const ExperimentConfig &cfg);
/// Repeated X or Rx(theta) with amplitude damping, per cfg.experiment.
ExperimentResult exp_amp_damp(const ExperimentConfig &cfg);
ExperimentResult exp_qaoa_mud(const ExperimentConfig &cfg);
ExperimentResult emit_bounds_table(const ExperimentConfig &cfg);
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// The fixed instance used by exp_qaoa_mud for this config's seed.
MudInstance experiment_mud_instance(const ExperimentConfig &cfg);

/// Writes <out>/<table>.csv for every table and <out>/manifest.json.
std::vector<std::filesystem::path> write_outputs(const ExperimentConfig &cfg,
                                                 const ExperimentResult &result,
                                                 double seconds);

}  // namespace qem
