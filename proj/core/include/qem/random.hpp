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
#include <random>
#include <span>

namespace qem {

using Rng = std::mt19937_64;

/// Identifies one independent random stream: (master seed, trial, gate).
struct StreamId {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Hashes (master, a, b) into a seed. Distinct tuples give unrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                          std::uint64_t b = 0) noexcept;

Rng make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Binomial(n, p) draw. libstdc++'s binomial_distribution is biased for
/// n * p around 10, so this goes through Boost's BTRD sampler.
std::uint64_t sample_binomial(Rng &rng, std::uint64_t n, double p);

/// Multinomial(total, probs) by sequential conditional binomials.
/// Categories with zero probability get zero counts and consume no draws.
void sample_multinomial(Rng &rng, std::uint64_t total,
                        std::span<const double> probs,
                        std::span<std::uint64_t> counts);

}  // namespace qem
