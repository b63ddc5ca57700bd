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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "qem/simulator.hpp"

namespace qem {

namespace {

constexpr std::size_t kNoOperation = std::numeric_limits<std::size_t>::max();

struct Insertion {
  std::uint64_t sample;
  std::size_t step;
  std::size_t op;
};

// Floyd's algorithm: m distinct values from [0, n), returned sorted.
std::vector<std::uint64_t> distinct_positions(Rng &rng, std::uint64_t n,
                                              std::uint64_t m) {
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::uint64_t j = n - m; j < n; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const std::uint64_t t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ConcatSampler::ConcatSampler(const QemPlan &plan, std::int64_t ns,
                             ConcatOptions options)
    : plan_(&plan) {
  if (ns < 1) throw std::invalid_argument("mc_concat: Ns < 1");
  const Circuit &c = plan.circuit();
  const std::size_t steps = c.size();

  double log_norm = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (const auto &d = plan.decomposition(k)) log_norm += std::log(d->norm1());
  }
  const double n = static_cast<double>(ns) * std::exp(2.0 * log_norm);
  if (!(n <= static_cast<double>(options.max_samples))) {
    throw std::invalid_argument("mc_concat: sample count exceeds the configured cap");
  }
  samples_ = std::max<std::int64_t>(1, std::llround(n));
  scale_ = std::exp(log_norm) / static_cast<double>(samples_);

  dominant_.assign(steps, kNoOperation);
  deviate_prob_.assign(steps, 0.0);
  deviate_index_.resize(steps);
  deviate_cdf_.resize(steps);
  base_sign_ = 1.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto &d = plan.decomposition(k);
    if (!d) continue;
    const RealVector &p = d->sampling_probs();
    std::size_t best = d->support().front();
    for (std::size_t l : d->support()) {
      if (p[static_cast<Eigen::Index>(l)] > p[static_cast<Eigen::Index>(best)]) best = l;
    }
    dominant_[k] = best;
    base_sign_ *= d->signs()[static_cast<Eigen::Index>(best)];
    double mass = 0.0;
    for (std::size_t l : d->support()) {
      if (l == best) continue;
      mass += p[static_cast<Eigen::Index>(l)];
      deviate_index_[k].push_back(l);
      deviate_cdf_[k].push_back(mass);
    }
    deviate_prob_[k] = mass;
    for (double &x : deviate_cdf_[k]) x /= mass;
  }

  forward_.resize(steps + 1);
  backward_.resize(steps + 1);
  forward_[0] = c.input().coeffs();
  for (std::size_t k = 0; k < steps; ++k) {
    forward_[k + 1] = step(k, dominant_[k], forward_[k]);
  }
  backward_[steps] = c.observable().coeffs();
  for (std::size_t k = steps; k-- > 0;) {
    const Step &s = c.steps()[k];
    RealVector b = backward_[k + 1];
    if (s.noise) {
      b = plan.decomposition(k)->basis().apply_transpose(dominant_[k], b);
      b = channel_ptm(*s.noise).matrix().transpose() * b;
    }
    backward_[k] = s.gate.apply_transpose(b);
  }
}

RealVector ConcatSampler::step(std::size_t k, std::size_t op,
                               const RealVector &v) const {
  const Step &s = plan_->circuit().steps()[k];
  RealVector w = s.gate.apply(v);
  if (!s.noise) return w;
  return plan_->decomposition(k)->basis().apply(op, apply_channel(*s.noise, w));
}

EstimateRecord ConcatSampler::sample(StreamId id) const {
  const std::size_t steps = dominant_.size();
  const auto n = static_cast<std::uint64_t>(samples_);
  std::vector<Insertion> ins;
  for (std::size_t k = 0; k < steps; ++k) {
    if (deviate_prob_[k] <= 0.0) continue;
    Rng rng = make_stream(id.seed, id.trial, k);
    const std::uint64_t m = sample_binomial(rng, n, std::min(1.0, deviate_prob_[k]));
    if (m == 0) continue;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto &cdf = deviate_cdf_[k];
    for (std::uint64_t pos : distinct_positions(rng, n, m)) {
      const double u = unit(rng);
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      ins.push_back({pos, k, deviate_index_[k][static_cast<std::size_t>(it - cdf.begin())]});
    }
  }
  std::sort(ins.begin(), ins.end(), [](const Insertion &a, const Insertion &b) {
    return std::tie(a.sample, a.step) < std::tie(b.sample, b.step);
  });

  double total = 0.0;
  std::uint64_t touched = 0;
  for (std::size_t i = 0; i < ins.size();) {
    std::size_t j = i;
    while (j < ins.size() && ins[j].sample == ins[i].sample) ++j;
    ++touched;
    double sign = base_sign_;
    RealVector x = forward_[ins[i].step];
    std::size_t cursor = i;
    for (std::size_t k = ins[i].step; k <= ins[j - 1].step; ++k) {
      std::size_t op = dominant_[k];
      if (cursor < j && ins[cursor].step == k) {
        op = ins[cursor].op;
        const auto &d = *plan_->decomposition(k);
        sign *= d.signs()[static_cast<Eigen::Index>(op)] *
                d.signs()[static_cast<Eigen::Index>(dominant_[k])];
        ++cursor;
      }
      x = step(k, op, x);
    }
    total += sign * backward_[ins[j - 1].step + 1].dot(x);
    i = j;
  }
  const double base = backward_[steps].dot(forward_[steps]);
  total += static_cast<double>(n - touched) * base_sign_ * base;

  EstimateRecord r;
  r.value = scale_ * total;
  r.mode = EstimatorMode::mc_concat;
  r.seed = id.seed;
  r.samples_used = samples_;
  return r;
}

EstimateRecord run_mc_qem_concat(const Circuit &c, std::int64_t ns, StreamId id,
                                 ConcatOptions options) {
  const QemPlan plan(c);
  return ConcatSampler(plan, ns, options).sample(id);
}

}  // namespace qem
