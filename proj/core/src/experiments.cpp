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

#include "qem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "qem/bounds.hpp"
#include "qem/parallel.hpp"

#ifndef QEM_VERSION_STRING
#define QEM_VERSION_STRING "0.0.0"
#endif

namespace qem {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Stream tags keep the estimator families on unrelated seeds.
constexpr std::uint64_t kEmpiricalTag = 0x656d70;
constexpr std::uint64_t kConcatTag = 0x636f6e;
constexpr std::uint64_t kInstanceTag = 0x6d7564;

using Row = std::map<std::string, double>;

void add(Table &t, const Row &row) {
  std::vector<double> values;
  values.reserve(t.columns().size());
  for (const auto &c : t.columns()) values.push_back(row.at(c));
  t.add_row(std::move(values));
}

std::vector<std::size_t> sorted_checkpoints(const std::vector<std::int64_t> &v) {
  std::vector<std::size_t> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Observable z_observable() {
  RealVector v = RealVector::Zero(4);
  v[3] = std::sqrt(2.0);
  return Observable(std::move(v));
}

// prop4 needs eps_u < 1/2.
double prop4_or_nan(int n, double gates, std::int64_t ns, double eps_u) {
  return eps_u < 0.5 ? qem_rmse_bound_pauli(n, gates, ns, eps_u) : kNan;
}

std::vector<double> column_of(const std::vector<std::vector<double>> &per_trial,
                              std::size_t c) {
  std::vector<double> out;
  out.reserve(per_trial.size());
  for (const auto &t : per_trial) out.push_back(t[c]);
  return out;
}

struct McColumns {
  std::vector<RmseStats> empirical;
  std::vector<RmseStats> concat;
  std::vector<std::int64_t> concat_samples;
};

// Runs the enabled Monte Carlo modes at every checkpoint.
McColumns run_monte_carlo(const ExperimentConfig &cfg, const Circuit &circuit,
                          const std::vector<std::size_t> &cps,
                          const std::vector<double> &truth,
                          std::uint64_t row_seed) {
  McColumns out;
  const auto trials = static_cast<std::size_t>(cfg.trials);
  if (cfg.modes.mc_empirical) {
    const QemPlan plan(circuit);
    const std::uint64_t seed = derive_seed(cfg.seed, row_seed, kEmpiricalTag);
    const auto per_trial = run_trials(trials, [&](std::size_t t) {
      return mc_empirical_trajectory(plan, cfg.ns, {seed, t}, cps);
    });
    for (std::size_t c = 0; c < cps.size(); ++c) {
      out.empirical.push_back(rmse_stats(column_of(per_trial, c), truth[c]));
    }
  }
  if (cfg.modes.mc_concat) {
    for (std::size_t c = 0; c < cps.size(); ++c) {
      const QemPlan plan(circuit.prefix(cps[c]));
      const ConcatSampler sampler(plan, cfg.ns, {cfg.max_concat_samples});
      const std::uint64_t seed =
          derive_seed(cfg.seed, row_seed, kConcatTag + 0x1000 * (c + 1));
      const auto per_trial = run_trials(trials, [&](std::size_t t) {
        return std::vector<double>{sampler.sample({seed, t}).value};
      });
      out.concat.push_back(rmse_stats(column_of(per_trial, 0), truth[c]));
      out.concat_samples.push_back(sampler.samples());
    }
  }
  return out;
}

void push_mode_columns(std::vector<std::string> &cols, const ModeSet &m) {
  if (m.noqem) {
    cols.insert(cols.end(), {"r_noisy", "rmse_noqem"});
  }
  if (m.exact_qem) cols.emplace_back("rmse_exact");
  if (m.mc_empirical) {
    cols.insert(cols.end(), {"mean_mc_emp", "rmse_mc_emp", "rmse_mc_emp_se"});
  }
  if (m.mc_concat) {
    cols.insert(cols.end(), {"mean_mc_concat", "rmse_mc_concat",
                             "rmse_mc_concat_se", "concat_samples"});
  }
}

void fill_mode_values(Row &row, const ModeSet &m, std::size_t c,
                      double truth, const std::vector<double> &noisy,
                      const std::vector<double> &exact, const McColumns &mc) {
  if (m.noqem) {
    row["r_noisy"] = noisy[c];
    row["rmse_noqem"] = std::abs(noisy[c] - truth);
  }
  if (m.exact_qem) row["rmse_exact"] = std::abs(exact[c] - truth);
  if (m.mc_empirical) {
    row["mean_mc_emp"] = mc.empirical[c].mean;
    row["rmse_mc_emp"] = mc.empirical[c].rmse;
    row["rmse_mc_emp_se"] = mc.empirical[c].se;
  }
  if (m.mc_concat) {
    row["mean_mc_concat"] = mc.concat[c].mean;
    row["rmse_mc_concat"] = mc.concat[c].rmse;
    row["rmse_mc_concat_se"] = mc.concat[c].se;
    row["concat_samples"] = static_cast<double>(mc.concat_samples[c]);
  }
}

// Empirical RMSE for the conjecture comparison: MC modes first, then analytic.
double reported_rmse(const ModeSet &m, std::size_t c, const McColumns &mc,
                     double analytic) {
  if (m.mc_empirical) return mc.empirical[c].rmse;
  if (m.mc_concat) return mc.concat[c].rmse;
  return analytic;
}

ExperimentResult run_single_qubit(const ExperimentConfig &cfg, bool rx,
                                  bool damping) {
  cfg.validate();
  const auto cps = sorted_checkpoints(cfg.ng);
  const std::size_t max_ng = cps.back();
  const std::vector<double> levels =
      damping ? std::vector<double>{cfg.gamma} : cfg.eps;
  const std::string level_name = damping ? "gamma" : "eps";
  const ComplexMatrix u = rx ? rx_unitary(cfg.theta) : pauli_x_unitary();
  const std::string name(to_string(cfg.experiment));

  std::vector<std::string> cols = {level_name, "ng", "r_tilde"};
  push_mode_columns(cols, cfg.modes);
  cols.insert(cols.end(), {"rmse_analytic", "intrinsic_var", "prop1", "prop1_lb",
                           "prop2", "prop3", "prop4", "conjecture",
                           "conjecture_violated"});
  Table table(name, cols);

  std::vector<std::string> tcols = {level_name, "ng", "r_tilde"};
  if (cfg.modes.noqem) tcols.emplace_back("r_noisy");
  if (cfg.modes.exact_qem) tcols.emplace_back("r_exact");
  if (cfg.modes.mc_empirical) tcols.emplace_back("mean_mc_emp");
  if (cfg.modes.mc_concat) tcols.emplace_back("mean_mc_concat");
  tcols.emplace_back("envelope");
  Table trajectory(name + "_trajectory", tcols);

  nlohmann::json details;
  details["layers_equal_gates"] = true;
  details["levels"] = nlohmann::json::array();

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    const Channel noise = damping ? Channel(amplitude_damping(level))
                                  : Channel(depolarizing(level));
    const double eps_gate = gate_error_probability(noise);
    const Circuit circuit = repeated_gate_circuit(u, noise, max_ng);

    const auto truth = noiseless_trajectory(circuit, cps);
    const auto noisy = noisy_trajectory(circuit, cps);
    const auto exact = exact_qem_trajectory(circuit, cps);
    MomentOptions mopt;
    mopt.checkpoints = cps;
    const MomentResult moments =
        damping ? moment_recursion_general(circuit, cfg.ns, mopt)
                : moment_recursion_pauli(circuit, cfg.ns, mopt);
    const McColumns mc = run_monte_carlo(cfg, circuit, cps, truth, li);

    // Intrinsic variance of the noiseless output state.
    std::vector<double> intrinsic;
    {
      RealVector v = circuit.input().coeffs();
      std::size_t k = 0;
      for (std::size_t cp : cps) {
        for (; k < cp; ++k) v = circuit.steps()[k].gate.apply(v);
        intrinsic.push_back(intrinsic_variance(circuit.observable(), PtmState(v)));
      }
    }

    std::size_t violations = 0;
    for (std::size_t c = 0; c < cps.size(); ++c) {
      const double g = static_cast<double>(cps[c]);
      Row row;
      row[level_name] = level;
      row["ng"] = g;
      row["r_tilde"] = truth[c];
      fill_mode_values(row, cfg.modes, c, truth[c], noisy, exact, mc);
      row["rmse_analytic"] = moments.rmse_at_checkpoints[c];
      row["intrinsic_var"] = intrinsic[c];
      const double env = damping ? kNan : noqem_dynamic_range(level / 3.0, g);
      row["prop1"] = env;
      row["prop1_lb"] = damping ? kNan : std::max(0.0, std::abs(truth[c]) - env);
      row["prop2"] = noqem_error_upper(std::min(1.0, eps_gate), g);
      row["prop3"] = qem_rmse_bound_general(1, g, cfg.ns);
      row["prop4"] = damping ? kNan : prop4_or_nan(1, g, cfg.ns, level);
      const double conj = qem_rmse_conjecture(eps_gate, g, cfg.ns);
      row["conjecture"] = conj;
      const bool violated =
          reported_rmse(cfg.modes, c, mc, moments.rmse_at_checkpoints[c]) > conj;
      violations += violated ? 1 : 0;
      row["conjecture_violated"] = violated ? 1.0 : 0.0;
      add(table, row);

      Row trow;
      trow[level_name] = level;
      trow["ng"] = g;
      trow["r_tilde"] = truth[c];
      if (cfg.modes.noqem) trow["r_noisy"] = noisy[c];
      if (cfg.modes.exact_qem) trow["r_exact"] = exact[c];
      if (cfg.modes.mc_empirical) trow["mean_mc_emp"] = mc.empirical[c].mean;
      if (cfg.modes.mc_concat) trow["mean_mc_concat"] = mc.concat[c].mean;
      trow["envelope"] = env;
      add(trajectory, trow);
    }
    details["levels"].push_back(
        {{level_name, level},
         {"gate_error_probability", eps_gate},
         {"conjecture_violation_fraction",
          static_cast<double>(violations) / static_cast<double>(cps.size())}});
  }
  return {{std::move(table), std::move(trajectory)}, std::move(details)};
}

}  // namespace

ComplexMatrix pauli_x_unitary() {
  ComplexMatrix u(2, 2);
  u << 0, 1, 1, 0;
  return u;
}

ComplexMatrix rx_unitary(double theta) {
  using C = std::complex<double>;
  ComplexMatrix u(2, 2);
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  u << c, C(0.0, -s), C(0.0, -s), c;
  return u;
}

Circuit repeated_gate_circuit(const ComplexMatrix &u,
                              const std::optional<Channel> &noise,
                              std::size_t count) {
  const Gate gate = Gate::from_unitary(u, {0}, 1);
  std::vector<Step> steps(count, Step{gate, noise});
  return Circuit(1, std::move(steps), PtmState::zero_state(1), z_observable());
}

RmseStats rmse_stats(std::span<const double> values, double truth) {
  RmseStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  const double t = static_cast<double>(values.size());
  double sum = 0.0, sum_sq_err = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq_err += (v - truth) * (v - truth);
  }
  s.mean = sum / t;
  const double mse = sum_sq_err / t;
  s.rmse = std::sqrt(mse);
  double dev = 0.0, dev_sq = 0.0;
  for (double v : values) {
    dev += (v - s.mean) * (v - s.mean);
    const double e2 = (v - truth) * (v - truth) - mse;
    dev_sq += e2 * e2;
  }
  if (values.size() > 1) {
    s.std_dev = std::sqrt(dev / (t - 1.0));
    const double se_mse = std::sqrt(dev_sq / (t - 1.0) / t);
    s.se = s.rmse > 0.0 ? se_mse / (2.0 * s.rmse) : 0.0;
  }
  return s;
}

std::vector<std::vector<double>> run_trials(
    std::size_t trials,
    const std::function<std::vector<double>(std::size_t)> &fn) {
  std::vector<std::vector<double>> out(trials);
  parallel_for(trials, [&](std::size_t t) { out[t] = fn(t); });
  return out;
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  if (e == Experiment::qaoa_mud) cfg.eps = {3e-4};
  if (e == Experiment::bounds_table) {
    cfg.ng = parse_int_list("0..1000:10");
    cfg.eps = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  }
  return cfg;
}

ExperimentResult exp_bloch_x(const ExperimentConfig &cfg) {
  return run_single_qubit(cfg, false, false);
}

ExperimentResult exp_bloch_rx(const ExperimentConfig &cfg) {
  return run_single_qubit(cfg, true, false);
}

ExperimentResult exp_amp_damp(const ExperimentConfig &cfg) {
  return run_single_qubit(cfg, cfg.experiment == Experiment::amp_damp_rx, true);
}

MudInstance experiment_mud_instance(const ExperimentConfig &cfg) {
  Rng rng = make_stream(cfg.seed, kInstanceTag);
  return make_mud_instance(cfg.users, cfg.antennas, cfg.snr_db, rng);
}

ExperimentResult exp_qaoa_mud(const ExperimentConfig &cfg) {
  cfg.validate();
  const int n = cfg.users;
  const MudInstance inst = experiment_mud_instance(cfg);
  const Observable obs = build_mud_observable(inst);
  const double eps = cfg.eps.front();
  const QaoaOptions qopt{eps, cfg.two_qubit_noise};
  const QaoaLayout layout = qaoa_layout(obs, qopt);
  const std::size_t per_stage = layout.gates_per_stage();

  auto layers_for = [&](std::int64_t stages) {
    std::vector<std::vector<int>> touched;
    for (std::int64_t k = 0; k < stages; ++k) {
      touched.insert(touched.end(), layout.noisy_qubits.begin(),
                     layout.noisy_qubits.end());
    }
    return complete_layer_counts(touched, n);
  };
  auto max_gate_error = [](const Circuit &c) {
    double e = 0.0;
    for (const auto &s : c.steps()) {
      if (s.noise) e = std::max(e, gate_error_probability(*s.noise));
    }
    return e;
  };

  std::vector<std::string> cols = {"P", "gates", "layers", "r_tilde"};
  push_mode_columns(cols, cfg.modes);
  cols.insert(cols.end(), {"rmse_analytic", "intrinsic_var", "prop1", "prop1_lb",
                           "prop2", "prop3", "prop4", "conjecture",
                           "conjecture_violated"});
  Table table(std::string(to_string(cfg.experiment)), cols);

  nlohmann::json details;
  details["gates_per_stage"] = per_stage;
  details["eps"] = eps;
  details["two_qubit_noise"] = std::string(to_string(cfg.two_qubit_noise));
  details["instance"] = {
      {"h", std::vector<std::vector<double>>()},
      {"x_true", inst.x_true},
      {"y", std::vector<double>(inst.y.begin(), inst.y.end())},
      {"noise_var", inst.noise_var},
      {"z_norm", inst.z_norm}};
  for (Eigen::Index r = 0; r < inst.h.rows(); ++r) {
    std::vector<double> row(inst.h.cols());
    for (Eigen::Index c = 0; c < inst.h.cols(); ++c) row[c] = inst.h(r, c);
    details["instance"]["h"].push_back(row);
  }
  details["stages"] = nlohmann::json::array();

  for (std::size_t pi = 0; pi < cfg.stages.size(); ++pi) {
    const std::int64_t p = cfg.stages[pi];
    const Circuit circuit = build_qaoa_circuit(obs, static_cast<int>(p), n, qopt);
    const std::vector<std::size_t> cps = {circuit.size()};
    const auto truth = noiseless_trajectory(circuit, cps);
    const auto noisy = noisy_trajectory(circuit, cps);
    const auto exact = exact_qem_trajectory(circuit, cps);
    MomentOptions mopt;
    mopt.checkpoints = cps;
    const MomentResult moments = moment_recursion_pauli(circuit, cfg.ns, mopt);
    const McColumns mc = run_monte_carlo(cfg, circuit, cps, truth, 1000 + pi);
    const auto layers = layers_for(p);
    const double nl = layers.empty() ? 0.0 : static_cast<double>(layers.back());
    const double g = static_cast<double>(circuit.size());
    const double eps_u = max_gate_error(circuit);

    RealVector v = circuit.input().coeffs();
    for (const auto &s : circuit.steps()) v = s.gate.apply(v);

    Row row;
    row["P"] = static_cast<double>(p);
    row["gates"] = g;
    row["layers"] = nl;
    row["r_tilde"] = truth[0];
    fill_mode_values(row, cfg.modes, 0, truth[0], noisy, exact, mc);
    row["rmse_analytic"] = moments.rmse;
    row["intrinsic_var"] = intrinsic_variance(obs, PtmState(v));
    const double env = noqem_dynamic_range(eps / 3.0, nl);
    row["prop1"] = env;
    row["prop1_lb"] = std::max(0.0, std::abs(truth[0]) - env);
    row["prop2"] = noqem_error_upper(std::min(1.0, eps_u), g);
    row["prop3"] = qem_rmse_bound_general(n, g, cfg.ns);
    row["prop4"] = prop4_or_nan(n, g, cfg.ns, eps_u);
    const double conj = qem_rmse_conjecture(eps_u, g, cfg.ns);
    row["conjecture"] = conj;
    row["conjecture_violated"] =
        reported_rmse(cfg.modes, 0, mc, moments.rmse) > conj ? 1.0 : 0.0;
    add(table, row);
    details["stages"].push_back({{"P", p},
                                 {"gates", circuit.size()},
                                 {"layers", nl},
                                 {"max_gate_error_probability", eps_u}});
  }

  std::vector<Table> tables;
  tables.push_back(std::move(table));

  if (cfg.trajectory_stages > 0) {
    const auto p = cfg.trajectory_stages;
    const Circuit circuit = build_qaoa_circuit(obs, static_cast<int>(p), n, qopt);
    std::vector<std::size_t> cps;
    for (std::int64_t k = 0; k <= p; ++k) {
      cps.push_back(static_cast<std::size_t>(k) * per_stage);
    }
    const auto truth = noiseless_trajectory(circuit, cps);
    const auto noisy = noisy_trajectory(circuit, cps);
    const auto exact = exact_qem_trajectory(circuit, cps);
    MomentOptions mopt;
    mopt.checkpoints = cps;
    const MomentResult moments = moment_recursion_pauli(circuit, cfg.ns, mopt);
    ExperimentConfig tcfg = cfg;
    tcfg.modes.mc_concat = false;
    const McColumns mc = run_monte_carlo(tcfg, circuit, cps, truth, 999);
    const auto layers = layers_for(p);

    std::vector<std::string> tcols = {"stage", "gates", "layers", "r_tilde"};
    if (cfg.modes.noqem) tcols.emplace_back("r_noisy");
    if (cfg.modes.exact_qem) tcols.emplace_back("r_exact");
    if (cfg.modes.mc_empirical) {
      tcols.insert(tcols.end(), {"mean_mc_emp", "rmse_mc_emp"});
    }
    tcols.insert(tcols.end(), {"rmse_analytic", "envelope"});
    Table trajectory(std::string(to_string(cfg.experiment)) + "_trajectory", tcols);
    for (std::size_t c = 0; c < cps.size(); ++c) {
      const double nl =
          cps[c] == 0 ? 0.0 : static_cast<double>(layers[cps[c] - 1]);
      Row row;
      row["stage"] = static_cast<double>(c);
      row["gates"] = static_cast<double>(cps[c]);
      row["layers"] = nl;
      row["r_tilde"] = truth[c];
      if (cfg.modes.noqem) row["r_noisy"] = noisy[c];
      if (cfg.modes.exact_qem) row["r_exact"] = exact[c];
      if (cfg.modes.mc_empirical) {
        row["mean_mc_emp"] = mc.empirical[c].mean;
        row["rmse_mc_emp"] = mc.empirical[c].rmse;
      }
      row["rmse_analytic"] = moments.rmse_at_checkpoints[c];
      row["envelope"] = noqem_dynamic_range(eps / 3.0, nl);
      add(trajectory, row);
    }
    details["trajectory_stages"] = p;
    details["layers_per_stage_first"] = layers.size() >= per_stage
                                            ? layers[per_stage - 1]
                                            : std::size_t{0};
    tables.push_back(std::move(trajectory));
  }
  return {std::move(tables), std::move(details)};
}

ExperimentResult emit_bounds_table(const ExperimentConfig &cfg) {
  cfg.validate();
  Table table(std::string(to_string(cfg.experiment)),
              {"n", "ng", "ns", "eps", "prop1", "prop2", "prop3", "prop4",
               "conjecture"});
  for (auto n : cfg.qubits) {
    for (auto g64 : cfg.ng) {
      for (double eps : cfg.eps) {
        const double g = static_cast<double>(g64);
        const int q = static_cast<int>(n);
        table.add_row({static_cast<double>(n), g, static_cast<double>(cfg.ns), eps,
                       noqem_dynamic_range(eps / 3.0, g),
                       noqem_error_upper(eps, g),
                       qem_rmse_bound_general(q, g, cfg.ns),
                       prop4_or_nan(q, g, cfg.ns, eps),
                       qem_rmse_conjecture(eps, g, cfg.ns)});
      }
    }
  }
  return {{std::move(table)}, nlohmann::json::object()};
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
  switch (cfg.experiment) {
    case Experiment::bloch_x: return exp_bloch_x(cfg);
    case Experiment::bloch_rx: return exp_bloch_rx(cfg);
    case Experiment::amp_damp_x:
    case Experiment::amp_damp_rx: return exp_amp_damp(cfg);
    case Experiment::qaoa_mud: return exp_qaoa_mud(cfg);
    case Experiment::bounds_table: return emit_bounds_table(cfg);
  }
  throw std::invalid_argument("unknown experiment");
}

std::vector<std::filesystem::path> write_outputs(const ExperimentConfig &cfg,
                                                 const ExperimentResult &result,
                                                 double seconds) {
  const std::filesystem::path dir(cfg.out_path);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto &t : result.tables) {
    const auto path = dir / (t.name() + ".csv");
    t.write(path);
    written.push_back(path);
    outputs.push_back(path.filename().string());
  }
  nlohmann::json manifest;
  manifest["tool"] = "qem-lab";
  manifest["version"] = QEM_VERSION_STRING;
  manifest["experiment"] = std::string(to_string(cfg.experiment));
  manifest["config"] = to_json(cfg);
  manifest["config_hash"] = config_hash(cfg);
  manifest["seed"] = cfg.seed;
  manifest["threads"] = worker_count();
  manifest["timing_seconds"] = seconds;
  manifest["outputs"] = outputs;
  manifest["details"] = result.details;
  manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                              std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
#ifdef __VERSION__
  manifest["compiler"] = __VERSION__;
#endif
  const auto mpath = dir / "manifest.json";
  std::ofstream f(mpath, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + mpath.string());
  f << manifest.dump(2) << '\n';
  written.push_back(mpath);
  return written;
}

}  // namespace qem
