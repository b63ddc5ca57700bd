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

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qem/simulator.hpp"

namespace qem {

namespace {

void check_checkpoints(const Circuit &c, const std::vector<std::size_t> &cps) {
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] > c.size() || (i > 0 && cps[i] < cps[i - 1])) {
      throw std::invalid_argument(
          "checkpoints must be ascending and within the circuit length");
    }
  }
}

// Drives a covariance recursion and handles checkpoints and callbacks.
// `advance(k, mu_next, cov)` maps the covariance through step k, given the
// already propagated mean.
template <class Advance>
MomentResult run_recursion(const Circuit &c, const MomentOptions &options,
                           Advance &&advance) {
  check_checkpoints(c, options.checkpoints);
  const Observable &obs = c.observable();
  MomentResult result;
  MomentState &st = result.state;
  st.mu = c.input().coeffs();
  st.covariance = RealMatrix::Zero(st.mu.size(), st.mu.size());
  st.second_moment = st.mu * st.mu.transpose();
  st.k = 0;

  std::size_t next = 0;
  auto record = [&] {
    while (next < options.checkpoints.size() &&
           options.checkpoints[next] == st.k) {
      result.rmse_at_checkpoints.push_back(moment_rmse(st, obs));
      ++next;
    }
  };
  record();
  for (std::size_t k = 0; k < c.size(); ++k) {
    st.mu = c.steps()[k].gate.apply(st.mu);
    st.covariance = advance(k, st.mu, st.covariance);
    st.k = k + 1;
    if (options.on_step || next < options.checkpoints.size()) {
      st.second_moment = st.covariance + st.mu * st.mu.transpose();
    }
    if (options.on_step) options.on_step(st);
    record();
  }
  st.second_moment = st.covariance + st.mu * st.mu.transpose();
  result.rmse = moment_rmse(st, obs);
  return result;
}

}  // namespace

double moment_rmse(const MomentState &state, const Observable &obs) {
  const RealVector &o = obs.coeffs();
  const double var = o.dot(state.covariance * o);
  return std::sqrt(std::max(0.0, var));
}

MomentResult moment_recursion_pauli(const Circuit &c, std::int64_t ns,
                                    const MomentOptions &options) {
  if (ns < 1) throw std::invalid_argument("moment_recursion_pauli: Ns < 1");
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto &noise = c.steps()[k].noise;
    if (noise && !std::holds_alternative<PauliChannel>(*noise)) {
      throw std::invalid_argument(
          "moment_recursion_pauli: step " + std::to_string(k) +
          " has a non-Pauli channel; use moment_recursion_general");
    }
  }
  // Circuits repeat a handful of distinct channels, so Xi is cached.
  std::vector<std::pair<RealVector, RealMatrix>> cache;
  auto xi_for = [&](const PauliChannel &ch) -> const RealMatrix & {
    for (const auto &[probs, xi] : cache) {
      if (probs.size() == ch.probs().size() && probs == ch.probs()) return xi;
    }
    cache.emplace_back(ch.probs(),
                       residual_covariance(invert_pauli(ch), ch, ns));
    return cache.back().second;
  };
  return run_recursion(
      c, options,
      [&](std::size_t k, const RealVector &mu, const RealMatrix &cov) {
        const Step &s = c.steps()[k];
        RealMatrix next = s.gate.conjugate(cov);
        if (s.noise) {
          const RealMatrix &xi = xi_for(std::get<PauliChannel>(*s.noise));
          const RealMatrix moment = next + mu * mu.transpose();
          next += xi.cwiseProduct(moment);
        }
        return next;
      });
}

MomentResult moment_recursion_general(
    const Circuit &c, std::int64_t ns,
    const std::vector<std::optional<QuasiProbDecomposition>> &decomps,
    const MomentOptions &options) {
  if (ns < 1) throw std::invalid_argument("moment_recursion_general: Ns < 1");
  const QemPlan plan(c, decomps);
  return run_recursion(
      c, options,
      [&](std::size_t k, const RealVector &mu, const RealMatrix &cov) {
        const Step &s = c.steps()[k];
        RealMatrix next = s.gate.conjugate(cov);
        if (!s.noise) return next;
        const QuasiProbDecomposition &d = *plan.decomposition(k);
        const RealMatrix ch = channel_ptm(*s.noise).matrix();
        const RealMatrix m =
            ch * (next + mu * mu.transpose()) * ch.transpose();
        const double draws = static_cast<double>(draw_count(d, ns));
        const RealMatrix gamma = d.reconstruct();
        RealMatrix a = (1.0 - 1.0 / draws) * gamma * m * gamma.transpose();
        const double w = sampling_overhead_factor(d) / draws;
        const int n = c.num_qubits();
        for (std::size_t l : d.support()) {
          const double pl = w * d.sampling_probs()[static_cast<Eigen::Index>(l)];
          if (d.basis().is_pauli()) {
            RealVector e = RealVector::Zero(m.rows());
            e[static_cast<Eigen::Index>(l)] = 1.0;
            const RealVector sgn = walsh_transform(e, n);
            a += pl * m.cwiseProduct(sgn * sgn.transpose());
          } else {
            const PtmOperator op = d.basis().op(l);
            const RealMatrix &o = op.matrix();
            a += pl * o * m * o.transpose();
          }
        }
        return RealMatrix(a - mu * mu.transpose());
      });
}

MomentResult moment_recursion_general(const Circuit &c, std::int64_t ns,
                                      const MomentOptions &options) {
  const QemPlan plan(c);
  std::vector<std::optional<QuasiProbDecomposition>> decomps;
  decomps.reserve(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    decomps.push_back(plan.decomposition(k));
  }
  return moment_recursion_general(c, ns, decomps, options);
}

}  // namespace qem
