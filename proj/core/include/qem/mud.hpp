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

#include <vector>

#include "qem/pauli.hpp"
#include "qem/random.hpp"

namespace qem {

/// Received signal y = H x + w of an m-antenna, n-user uplink.
struct MudInstance {
  RealMatrix h;             // m x n, i.i.d. N(0, 1/m)
  std::vector<int> x_true;  // +-1
  RealVector y;             // length m
  double noise_var = 0.0;
  double z_norm = 0.0;      // l1 norm of the Ising coefficients
};

/// Draws H row by row, then x, then the noise.
MudInstance make_mud_instance(int n, int m, double snr_db, Rng &rng);

/// Field h_i = [H^T y]_i.
RealVector mud_fields(const MudInstance &inst);
/// Coupling J_ij = [H^T H]_ij (only i < j is used).
RealMatrix mud_couplings(const MudInstance &inst);

/**
 * Observable (1/Z) (sum_i h_i Z_i - sum_{i<j} J_ij Z_i Z_j).
 *
 * Coefficients are PTM coefficients, i.e. 2^(n/2) times the operator weights.
 */
Observable build_mud_observable(const MudInstance &inst);

}  // namespace qem
