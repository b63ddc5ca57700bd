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

#include "qem/mud.hpp"

#include <cmath>
#include <stdexcept>

namespace qem {

MudInstance make_mud_instance(int n, int m, double snr_db, Rng &rng) {
  if (n < 1 || m < 1) throw std::invalid_argument("make_mud_instance: n, m >= 1");
  MudInstance inst;
  inst.noise_var = std::pow(10.0, -snr_db / 10.0);
  std::normal_distribution<double> channel(0.0, std::sqrt(1.0 / m));
  inst.h.resize(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) inst.h(r, c) = channel(rng);
  }
  std::bernoulli_distribution coin(0.5);
  inst.x_true.resize(static_cast<std::size_t>(n));
  RealVector x(n);
  for (int i = 0; i < n; ++i) {
    inst.x_true[static_cast<std::size_t>(i)] = coin(rng) ? 1 : -1;
    x[i] = inst.x_true[static_cast<std::size_t>(i)];
  }
  std::normal_distribution<double> noise(0.0, std::sqrt(inst.noise_var));
  inst.y = inst.h * x;
  for (int r = 0; r < m; ++r) inst.y[r] += noise(rng);

  const RealVector f = mud_fields(inst);
  const RealMatrix j = mud_couplings(inst);
  double z = f.cwiseAbs().sum();
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) z += std::abs(j(a, b));
  }
  inst.z_norm = z;
  return inst;
}

RealVector mud_fields(const MudInstance &inst) {
  return inst.h.transpose() * inst.y;
}

RealMatrix mud_couplings(const MudInstance &inst) {
  return inst.h.transpose() * inst.h;
}

Observable build_mud_observable(const MudInstance &inst) {
  const int n = static_cast<int>(inst.h.cols());
  if (!(inst.z_norm > 0.0)) {
    throw std::invalid_argument("build_mud_observable: degenerate instance");
  }
  const RealVector f = mud_fields(inst);
  const RealMatrix j = mud_couplings(inst);
  const double scale = std::pow(2.0, 0.5 * n) / inst.z_norm;
  RealVector v = RealVector::Zero(static_cast<Eigen::Index>(pauli_dimension(n)));
  const auto z_on = [](int q) { return Eigen::Index{3} << (2 * q); };
  for (int a = 0; a < n; ++a) {
    v[z_on(a)] = scale * f[a];
    for (int b = a + 1; b < n; ++b) {
      v[z_on(a) | z_on(b)] = -scale * j(a, b);
    }
  }
  Observable obs(std::move(v));
  if (obs.spectral_radius() > 1.0 + kMatrixTolerance) {
    throw std::logic_error("build_mud_observable: eigenvalue outside [-1, 1]");
  }
  return obs;
}

}  // namespace qem
