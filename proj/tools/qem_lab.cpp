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

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qem/config.hpp"
#include "qem/experiments.hpp"

namespace {

qem::ExperimentConfig build_config(const std::string &experiment,
                                   const std::string &config_path,
                                   const CLI::App &app,
                                   const std::map<std::string, std::string> &flags) {
  const qem::Experiment e = qem::experiment_from_string(experiment);
  qem::ExperimentConfig cfg = qem::default_config(e);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config " + config_path);
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.contains("experiment") &&
        qem::experiment_from_string(j["experiment"].get<std::string>()) != e) {
      throw std::invalid_argument("config file names a different experiment");
    }
    qem::merge_json(cfg, j);
  }
  nlohmann::json overrides = nlohmann::json::object();
  for (const auto &[flag, key] : std::map<std::string, std::string>{
           {"--ng", "ng"}, {"--stages", "stages"}, {"--eps", "eps"},
           {"--modes", "modes"}, {"--qubits", "qubits"}, {"--out", "out"},
           {"--two-qubit-noise", "two_qubit_noise"}}) {
    if (app.count(flag) > 0) overrides[key] = flags.at(key);
  }
  merge_json(cfg, overrides);
  return cfg;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"qem-lab: quasi-probability error mitigation experiments"};
  app.set_version_flag("--version", std::string(QEM_LAB_VERSION));

  std::string experiment;
  std::string config_path;
  std::map<std::string, std::string> flags;
  std::optional<double> gamma, theta, snr_db;
  std::optional<std::int64_t> ns, trials, trajectory_stages, max_concat;
  std::optional<std::uint64_t> seed;
  std::optional<int> users, antennas;

  app.add_option("experiment", experiment,
                 "bloch_x | bloch_rx | amp_damp_x | amp_damp_rx | qaoa_mud | "
                 "bounds_table")
      ->required();
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--eps", flags["eps"], "gate error probability, or a comma list");
  app.add_option("--gamma", gamma, "amplitude damping probability");
  app.add_option("--theta", theta, "Rx angle in radians");
  app.add_option("--ns", ns, "effective circuit executions N_s");
  app.add_option("--trials", trials, "Monte Carlo trials per row");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--ng", flags["ng"], "gate counts: a..b, a..b:step or a,b,c");
  app.add_option("--stages", flags["stages"], "QAOA stage counts P");
  app.add_option("--trajectory-stages", trajectory_stages,
                 "P of the QAOA per-stage trajectory table (0 disables)");
  app.add_option("--modes", flags["modes"], "subset of noqem,exact,mc-emp,mc-concat");
  app.add_option("--out", flags["out"], "output directory");
  app.add_option("--two-qubit-noise", flags["two_qubit_noise"],
                 "per-qubit | first-qubit");
  app.add_option("--max-concat-samples", max_concat, "cap on concat samples N");
  app.add_option("--qubits", flags["qubits"], "qubit counts for bounds_table");
  app.add_option("--users", users, "MUD users n");
  app.add_option("--antennas", antennas, "MUD antennas m");
  app.add_option("--snr-db", snr_db, "MUD signal-to-noise ratio in dB");

  CLI11_PARSE(app, argc, argv);

  try {
    qem::ExperimentConfig cfg = build_config(experiment, config_path, app, flags);
    if (gamma) cfg.gamma = *gamma;
    if (theta) cfg.theta = *theta;
    if (snr_db) cfg.snr_db = *snr_db;
    if (ns) cfg.ns = *ns;
    if (trials) cfg.trials = *trials;
    if (trajectory_stages) cfg.trajectory_stages = *trajectory_stages;
    if (max_concat) cfg.max_concat_samples = *max_concat;
    if (seed) cfg.seed = *seed;
    if (users) cfg.users = *users;
    if (antennas) cfg.antennas = *antennas;
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    const qem::ExperimentResult result = qem::run_experiment(cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    for (const auto &path : qem::write_outputs(cfg, result, seconds)) {
      std::cout << path.string() << '\n';
    }
  } catch (const std::exception &e) {
    std::cerr << "qem-lab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
