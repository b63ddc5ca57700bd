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

#include "qem/random.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <boost/random/binomial_distribution.hpp>

namespace qem {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b) noexcept {
  return mix64(mix64(mix64(master) ^ a) ^ b);
}

Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{derive_seed(master, a, b)};
  return Rng(seq);
}

std::uint64_t sample_binomial(Rng &rng, std::uint64_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_binomial: p outside [0, 1]");
  }
  if (n > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("sample_binomial: n too large");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  boost::random::binomial_distribution<std::int64_t, double> bin(
      static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(bin(rng));
}

void sample_multinomial(Rng &rng, std::uint64_t total,
                        std::span<const double> probs,
                        std::span<std::uint64_t> counts) {
  if (probs.size() != counts.size()) {
    throw std::invalid_argument("sample_multinomial: size mismatch");
  }
  std::fill(counts.begin(), counts.end(), 0);
  std::size_t last = probs.size();
  while (last > 0 && probs[last - 1] == 0.0) --last;
  if (last == 0) throw std::invalid_argument("sample_multinomial: all zero");

  std::uint64_t remaining = total;
  double mass = 0.0;
  for (std::size_t i = 0; i < last; ++i) mass += probs[i];
  for (std::size_t i = 0; i + 1 < last && remaining > 0; ++i) {
    if (probs[i] == 0.0) continue;
    const double q = std::clamp(probs[i] / mass, 0.0, 1.0);
    const std::uint64_t k = sample_binomial(rng, remaining, q);
    counts[i] = k;
    remaining -= k;
    mass -= probs[i];
    if (mass <= 0.0) break;
  }
  counts[last - 1] += remaining;
}

}  // namespace qem
