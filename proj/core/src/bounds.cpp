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

#include "qem/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qem {

namespace {

void require_nonnegative(double x, const char *what) {
  if (!(x >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

void require_ns(std::int64_t ns) {
  if (ns < 1) throw std::invalid_argument("Ns must be >= 1");
}

double sqrt_expm1(double x) { return std::sqrt(std::expm1(x)); }

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::prop1_lb: return "prop1_lb";
    case BoundKind::prop2_ub: return "prop2_ub";
    case BoundKind::prop3: return "prop3";
    case BoundKind::prop4: return "prop4";
    case BoundKind::conjecture: return "conjecture";
  }
  return "unknown";
}

double noqem_dynamic_range(double eps_l, double layers) {
  require_nonnegative(eps_l, "eps_l");
  require_nonnegative(layers, "N_L");
  return std::exp(-4.0 * eps_l * layers);
}

double noqem_error_upper(double eps_u, double gates) {
  if (!(eps_u >= 0.0 && eps_u <= 1.0)) {
    throw std::invalid_argument("eps_u must lie in [0, 1]");
  }
  require_nonnegative(gates, "N_G");
  return 2.0 * eps_u * gates;
}

double qem_rmse_bound_general(int num_qubits, double gates, std::int64_t ns) {
  require_ns(ns);
  require_nonnegative(gates, "N_G");
  return std::pow(2.0, 0.5 * num_qubits) *
         sqrt_expm1(2.0 * gates / static_cast<double>(ns));
}

double sigma_u(double eps_u) {
  if (!(eps_u >= 0.0 && eps_u < 0.5)) {
    throw std::invalid_argument("eps_u must lie in [0, 1/2)");
  }
  const double d = 1.0 - 2.0 * eps_u;
  return 4.0 * eps_u * (1.0 - eps_u) / (d * d);
}

double eps_tilde(double eps_u) {
  const double s = sigma_u(eps_u);
  return 2.5 * s + 0.25 * s * s;
}

double qem_rmse_bound_pauli(int num_qubits, double gates, std::int64_t ns,
                            double eps_u) {
  require_ns(ns);
  require_nonnegative(gates, "N_G");
  return std::pow(2.0, 0.5 * num_qubits) *
         sqrt_expm1(eps_tilde(eps_u) * gates / static_cast<double>(ns));
}

double qem_rmse_bound_pauli_approx(int num_qubits, double gates,
                                   std::int64_t ns, double eps_u) {
  require_ns(ns);
  require_nonnegative(gates, "N_G");
  sigma_u(eps_u);
  return std::pow(2.0, 0.5 * num_qubits) *
         sqrt_expm1(10.0 * eps_u * gates / static_cast<double>(ns));
}

double qem_rmse_conjecture(double eps, double gates, std::int64_t ns) {
  require_ns(ns);
  require_nonnegative(gates, "N_G");
  require_nonnegative(eps, "eps");
  return sqrt_expm1(eps * gates / static_cast<double>(ns));
}

}  // namespace qem
