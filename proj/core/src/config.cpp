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

#include "qem/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

#include "qem/pauli.hpp"

namespace qem {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t to_int(const std::string &s) {
  std::int64_t v = 0;
  const auto *end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

double to_double(const std::string &s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::vector<std::int64_t> int_list_from_json(const nlohmann::json &j) {
  if (j.is_string()) return parse_int_list(j.get<std::string>());
  if (j.is_number_integer()) return {j.get<std::int64_t>()};
  return j.get<std::vector<std::int64_t>>();
}

std::vector<double> double_list_from_json(const nlohmann::json &j) {
  if (j.is_string()) return parse_double_list(j.get<std::string>());
  if (j.is_number()) return {j.get<double>()};
  return j.get<std::vector<double>>();
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::bloch_x: return "bloch_x";
    case Experiment::bloch_rx: return "bloch_rx";
    case Experiment::amp_damp_x: return "amp_damp_x";
    case Experiment::amp_damp_rx: return "amp_damp_rx";
    case Experiment::qaoa_mud: return "qaoa_mud";
    case Experiment::bounds_table: return "bounds_table";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view s) {
  std::string key(s);
  std::replace(key.begin(), key.end(), '-', '_');
  for (Experiment e : {Experiment::bloch_x, Experiment::bloch_rx,
                       Experiment::amp_damp_x, Experiment::amp_damp_rx,
                       Experiment::qaoa_mud, Experiment::bounds_table}) {
    if (key == to_string(e)) return e;
  }
  throw std::invalid_argument("unknown experiment: " + std::string(s));
}

ModeSet parse_modes(std::string_view s) {
  ModeSet m{false, false, false, false};
  for (const auto &tok : split(s, ',')) {
    if (tok.empty()) continue;
    if (tok == "noqem") {
      m.noqem = true;
    } else if (tok == "exact" || tok == "exact_qem" || tok == "exact-qem") {
      m.exact_qem = true;
    } else if (tok == "mc-emp" || tok == "mc_emp" || tok == "mc_empirical") {
      m.mc_empirical = true;
    } else if (tok == "mc-concat" || tok == "mc_concat") {
      m.mc_concat = true;
    } else {
      throw std::invalid_argument("unknown mode: " + tok);
    }
  }
  return m;
}

std::string to_string(const ModeSet &m) {
  std::vector<std::string> parts;
  if (m.noqem) parts.emplace_back("noqem");
  if (m.exact_qem) parts.emplace_back("exact");
  if (m.mc_empirical) parts.emplace_back("mc-emp");
  if (m.mc_concat) parts.emplace_back("mc-concat");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::int64_t> parse_int_list(std::string_view s) {
  std::vector<std::int64_t> out;
  for (const auto &tok : split(s, ',')) {
    if (tok.empty()) continue;
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(tok));
      continue;
    }
    std::string hi_part = tok.substr(dots + 2);
    std::int64_t step = 1;
    if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
      step = to_int(trim(hi_part.substr(colon + 1)));
      hi_part = hi_part.substr(0, colon);
    }
    const std::int64_t lo = to_int(trim(tok.substr(0, dots)));
    const std::int64_t hi = to_int(trim(hi_part));
    if (step <= 0 || hi < lo) {
      throw std::invalid_argument("bad range: '" + tok + "'");
    }
    for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::vector<double> parse_double_list(std::string_view s) {
  std::vector<double> out;
  for (const auto &tok : split(s, ',')) {
    if (!tok.empty()) out.push_back(to_double(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string &msg) { throw std::invalid_argument(msg); };
  if (ns < 1) fail("ns must be >= 1");
  if (trials < 1) fail("trials must be >= 1");
  if (eps.empty()) fail("eps list is empty");
  for (double e : eps) {
    if (!(e >= 0.0 && e < 0.75)) fail("eps must lie in [0, 3/4)");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail("gamma must lie in [0, 1]");
  if (ng.empty()) fail("ng list is empty");
  for (auto g : ng) {
    if (g < 0) fail("ng entries must be >= 0");
  }
  for (auto p : stages) {
    if (p < 0) fail("stages must be >= 0");
  }
  if (trajectory_stages < 0) fail("trajectory_stages must be >= 0");
  if (users < 1 || antennas < 1) fail("users and antennas must be >= 1");
  if (users > kMaxQubits) fail("too many users for the qubit cap");
  for (auto q : qubits) {
    if (q < 1 || q > kMaxQubits) fail("qubits entries out of range");
  }
  if (max_concat_samples < 1) fail("max_concat_samples must be >= 1");
}

nlohmann::json to_json(const ExperimentConfig &cfg) {
  nlohmann::json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  j["ng"] = cfg.ng;
  j["stages"] = cfg.stages;
  j["trajectory_stages"] = cfg.trajectory_stages;
  j["eps"] = cfg.eps;
  j["gamma"] = cfg.gamma;
  j["theta"] = cfg.theta;
  j["ns"] = cfg.ns;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["modes"] = to_string(cfg.modes);
  j["out"] = cfg.out_path;
  j["users"] = cfg.users;
  j["antennas"] = cfg.antennas;
  j["snr_db"] = cfg.snr_db;
  j["two_qubit_noise"] = std::string(to_string(cfg.two_qubit_noise));
  j["max_concat_samples"] = cfg.max_concat_samples;
  j["qubits"] = cfg.qubits;
  return j;
}

void merge_json(ExperimentConfig &cfg, const nlohmann::json &j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key == "experiment") {
      cfg.experiment = experiment_from_string(value.get<std::string>());
    } else if (key == "ng") {
      cfg.ng = int_list_from_json(value);
    } else if (key == "stages") {
      cfg.stages = int_list_from_json(value);
    } else if (key == "trajectory_stages") {
      cfg.trajectory_stages = value.get<std::int64_t>();
    } else if (key == "eps") {
      cfg.eps = double_list_from_json(value);
    } else if (key == "gamma") {
      cfg.gamma = value.get<double>();
    } else if (key == "theta") {
      cfg.theta = value.get<double>();
    } else if (key == "ns") {
      cfg.ns = value.get<std::int64_t>();
    } else if (key == "trials") {
      cfg.trials = value.get<std::int64_t>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "modes") {
      if (value.is_array()) {
        std::string joined;
        for (const auto &m : value) joined += m.get<std::string>() + ",";
        cfg.modes = parse_modes(joined);
      } else {
        cfg.modes = parse_modes(value.get<std::string>());
      }
    } else if (key == "out") {
      cfg.out_path = value.get<std::string>();
    } else if (key == "users") {
      cfg.users = value.get<int>();
    } else if (key == "antennas") {
      cfg.antennas = value.get<int>();
    } else if (key == "snr_db") {
      cfg.snr_db = value.get<double>();
    } else if (key == "two_qubit_noise") {
      cfg.two_qubit_noise = two_qubit_noise_from_string(value.get<std::string>());
    } else if (key == "max_concat_samples") {
      cfg.max_concat_samples = value.get<std::int64_t>();
    } else if (key == "qubits") {
      cfg.qubits = int_list_from_json(value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig &cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json(cfg).dump())));
  return buf;
}

}  // namespace qem
