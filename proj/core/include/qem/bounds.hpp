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
#include <string_view>

namespace qem {

enum class BoundKind { prop1_lb, prop2_ub, prop3, prop4, conjecture };

std::string_view to_string(BoundKind kind);

/// A bound value with the inputs that produced it.
struct BoundReport {
  BoundKind name;
  double value;
  int num_qubits = 1;
  std::int64_t gates = 0;  // N_G, or N_L for prop1_lb
  std::int64_t ns = 0;
  double eps = 0.0;
};

/// exp(-4 eps_l N_L): dynamic range of an unmitigated result.
double noqem_dynamic_range(double eps_l, double layers);

/// 2 eps_u N_G.
double noqem_error_upper(double eps_u, double gates);

/// 2^(n/2) sqrt(exp(2 N_G / Ns) - 1).
double qem_rmse_bound_general(int num_qubits, double gates, std::int64_t ns);

/// 4 eps_u (1 - eps_u) / (1 - 2 eps_u)^2. Throws for eps_u >= 1/2.
double sigma_u(double eps_u);

/// (5/2) sigma_u + sigma_u^2 / 4.
double eps_tilde(double eps_u);

/// 2^(n/2) sqrt(exp(eps_tilde N_G / Ns) - 1).
double qem_rmse_bound_pauli(int num_qubits, double gates, std::int64_t ns,
                            double eps_u);

/// Small-eps form with 10 eps_u in place of eps_tilde.
double qem_rmse_bound_pauli_approx(int num_qubits, double gates,
                                   std::int64_t ns, double eps_u);

/// sqrt(exp(eps N_G / Ns) - 1).
double qem_rmse_conjecture(double eps, double gates, std::int64_t ns);

}  // namespace qem
