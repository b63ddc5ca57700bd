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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qem/qaoa.hpp"

namespace qem {

enum class Experiment { bloch_x, bloch_rx, amp_damp_x, amp_damp_rx, qaoa_mud, bounds_table };

std::string_view to_string(Experiment e);
/// Accepts underscores or hyphens.
Experiment experiment_from_string(std::string_view s);

struct ModeSet {
  bool noqem = true;
  bool exact_qem = true;
  bool mc_empirical = true;
  bool mc_concat = false;
};

/// Parses "noqem,exact,mc-emp,mc-concat" (long names are accepted too).
ModeSet parse_modes(std::string_view s);
std::string to_string(const ModeSet &m);

/// Parses "a..b", "a..b:step" and comma lists of either.
std::vector<std::int64_t> parse_int_list(std::string_view s);
std::vector<double> parse_double_list(std::string_view s);

struct ExperimentConfig {
  Experiment experiment = Experiment::bloch_x;
  std::vector<std::int64_t> ng = parse_int_list("1..100");
  std::vector<std::int64_t> stages = {9, 16, 25, 36, 49, 64, 81};
  std::int64_t trajectory_stages = 81;
  std::vector<double> eps = {1e-3};
  double gamma = 1e-3;
  double theta = 0.01227184630308513;  // pi / 256
  std::int64_t ns = 5000;
  std::int64_t trials = 200;
  std::uint64_t seed = 1;
  ModeSet modes;
  std::string out_path = "qem-out";
  int users = 4;
  int antennas = 4;
  double snr_db = 12.0;
  TwoQubitNoise two_qubit_noise = TwoQubitNoise::per_qubit;
  std::int64_t max_concat_samples = std::int64_t{1} << 40;
  std::vector<std::int64_t> qubits = {1};

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig &cfg);
/// Fields absent from j keep the values already in cfg.
void merge_json(ExperimentConfig &cfg, const nlohmann::json &j);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
/// FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig &cfg);

}  // namespace qem
