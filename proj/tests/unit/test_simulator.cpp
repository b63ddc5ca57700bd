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
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qem/experiments.hpp"
#include "qem/simulator.hpp"
#include "test_util.hpp"

namespace qem {
namespace {

Circuit x_circuit(double eps, std::size_t ng) {
  return repeated_gate_circuit(pauli_x_unitary(), Channel(depolarizing(eps)), ng);
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double rmse = 0.0;
};

Moments sample_moments(const std::vector<double> &xs, double truth) {
  Moments m;
  double s = 0.0;
  double sq = 0.0;
  double err = 0.0;
  for (double x : xs) {
    s += x;
    sq += x * x;
    err += (x - truth) * (x - truth);
  }
  const double n = static_cast<double>(xs.size());
  m.mean = s / n;
  m.sd = std::sqrt(std::max(0.0, sq / n - m.mean * m.mean));
  m.rmse = std::sqrt(err / n);
  return m;
}

TEST(Circuit, Validation) {
  const Gate x = Gate::from_unitary(pauli_x_unitary(), {0}, 1);
  const Observable z = observable_to_ptm(testing::sigma(3));
  EXPECT_THROW(Circuit(2, {Step{x, std::nullopt}}, PtmState::zero_state(2),
                       observable_to_ptm(ComplexMatrix::Identity(4, 4))),
               std::invalid_argument);
  EXPECT_THROW(Circuit(1, {Step{x, Channel(lift_single_qubit(depolarizing(0.1), 1, 2))}},
                       PtmState::zero_state(1), z),
               std::invalid_argument);
  const Circuit c = x_circuit(1e-3, 7);
  EXPECT_EQ(c.prefix(3).size(), 3u);
  EXPECT_THROW(c.prefix(8), std::out_of_range);
}

TEST(Noiseless, Examples) {
  const Circuit empty(1, {}, PtmState::zero_state(1), observable_to_ptm(testing::sigma(3)));
  EXPECT_NEAR(run_noiseless(empty), 1.0, 1e-15);
  for (std::size_t ng : {1u, 2u, 7u, 100u}) {
    EXPECT_NEAR(run_noiseless(x_circuit(1e-3, ng)), ng % 2 ? -1.0 : 1.0, 1e-12);
  }
  const double theta = M_PI / 256;
  for (std::size_t ng : {1u, 50u, 128u, 300u}) {
    const Circuit c = repeated_gate_circuit(rx_unitary(theta), std::nullopt, ng);
    EXPECT_NEAR(run_noiseless(c), std::cos(static_cast<double>(ng) * theta), 1e-12);
  }
}

TEST(Noisy, ClosedForm) {
  for (double eps : {1e-4, 1e-3, 1e-2}) {
    for (std::size_t ng : {1u, 10u, 101u}) {
      const double c = 1 - 4 * eps / 3;
      const double expected = (ng % 2 ? -1.0 : 1.0) * std::pow(c, static_cast<double>(ng));
      EXPECT_NEAR(run_noisy(x_circuit(eps, ng)), expected, 1e-12);
    }
  }
  const Circuit clean = repeated_gate_circuit(rx_unitary(0.3), std::nullopt, 9);
  EXPECT_EQ(run_noisy(clean), run_noiseless(clean));
}

TEST(Noisy, MatchesDenseMatrixProducts) {
  // Brute-force density matrix evolution with explicit Kraus operators.
  const double eps = 0.05;
  const std::size_t ng = 6;
  const ComplexMatrix u = rx_unitary(0.4);
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1;
  for (std::size_t k = 0; k < ng; ++k) {
    rho = u * rho * u.adjoint();
    ComplexMatrix next = (1 - eps) * rho;
    for (int p = 1; p < 4; ++p) next += eps / 3 * testing::sigma(p) * rho * testing::sigma(p);
    rho = next;
  }
  const double expected = (testing::sigma(3) * rho).trace().real();
  const Circuit c = repeated_gate_circuit(u, Channel(depolarizing(eps)), ng);
  EXPECT_NEAR(run_noisy(c), expected, 1e-12);
}

TEST(ExactQem, EqualsNoiseless) {
  const Circuit x100 = x_circuit(1e-3, 100);
  EXPECT_NEAR(run_exact_qem(x100), 1.0, 1e-10);
  const Circuit ad = repeated_gate_circuit(pauli_x_unitary(), Channel(amplitude_damping(1e-3)), 10);
  EXPECT_NEAR(run_exact_qem(ad), run_noiseless(ad), 1e-10);
  const Circuit adrx = repeated_gate_circuit(rx_unitary(0.3), Channel(amplitude_damping(0.2)), 25);
  EXPECT_NEAR(run_exact_qem(adrx), run_noiseless(adrx), 1e-10);
}

TEST(Trajectories, MatchPrefixRuns) {
  const Circuit c = repeated_gate_circuit(rx_unitary(0.2), Channel(depolarizing(1e-2)), 30);
  const std::vector<std::size_t> cps = {0, 1, 10, 10, 30};
  const auto noiseless = noiseless_trajectory(c, cps);
  const auto noisy = noisy_trajectory(c, cps);
  const auto exact = exact_qem_trajectory(c, cps);
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const Circuit p = c.prefix(cps[i]);
    EXPECT_NEAR(noiseless[i], run_noiseless(p), 1e-14);
    EXPECT_NEAR(noisy[i], run_noisy(p), 1e-14);
    EXPECT_NEAR(exact[i], noiseless[i], 1e-10);
  }
  const std::vector<std::size_t> bad = {5, 2};
  EXPECT_THROW(noisy_trajectory(c, bad), std::invalid_argument);
}

TEST(McEmpirical, IdentityChannelsAreExact) {
  const Circuit c =
      repeated_gate_circuit(rx_unitary(0.3), Channel(PauliChannel::identity(1)), 20);
  for (std::uint64_t t = 0; t < 5; ++t) {
    EXPECT_NEAR(run_mc_qem_empirical(c, 7, {1, t}).value, run_noiseless(c), 1e-12);
  }
}

TEST(McEmpirical, DeterministicPerStream) {
  const Circuit c = x_circuit(1e-2, 20);
  const auto a = run_mc_qem_empirical(c, 100, {42, 3});
  const auto b = run_mc_qem_empirical(c, 100, {42, 3});
  const auto other = run_mc_qem_empirical(c, 100, {42, 4});
  EXPECT_EQ(a.value, b.value);
  EXPECT_NE(a.value, other.value);
  EXPECT_EQ(a.mode, EstimatorMode::mc_empirical);
}

TEST(McEmpirical, LargeBudgetConverges) {
  const Circuit c = x_circuit(1e-3, 10);
  const auto r = run_mc_qem_empirical(c, 1000000, {5, 0});
  EXPECT_NEAR(r.value, run_noiseless(c), 1e-3);
}

TEST(McEmpirical, UnbiasedAndMatchesRecursion) {
  const Circuit c = x_circuit(1e-3, 50);
  const double truth = run_noiseless(c);
  const int trials = 10000;
  std::vector<double> xs(trials);
  for (int t = 0; t < trials; ++t) {
    xs[static_cast<std::size_t>(t)] =
        run_mc_qem_empirical(c, 5000, {11, static_cast<std::uint64_t>(t)}).value;
  }
  const Moments m = sample_moments(xs, truth);
  EXPECT_LE(std::abs(m.mean - truth), 4 * m.sd / std::sqrt(trials));
  const double analytic = moment_recursion_pauli(c, 5000).rmse;
  EXPECT_NEAR(m.rmse / analytic, 1.0, 0.1);
}

TEST(McEmpirical, TrajectoryMatchesPrefixRuns) {
  const Circuit c = x_circuit(1e-2, 12);
  const QemPlan plan(c);
  const std::vector<std::size_t> cps = {0, 5, 12};
  const auto traj = mc_empirical_trajectory(plan, 300, {2, 9}, cps);
  EXPECT_NEAR(traj[0], 1.0, 1e-15);
  EXPECT_EQ(traj[2], run_mc_qem_empirical(c, 300, {2, 9}).value);
  EXPECT_EQ(traj[1], run_mc_qem_empirical(c.prefix(5), 300, {2, 9}).value);
}

TEST(MomentRecursion, InfiniteBudgetGivesZero) {
  const Circuit c = x_circuit(1e-3, 50);
  const std::int64_t huge = std::int64_t{1} << 50;
  EXPECT_LT(moment_recursion_pauli(c, huge).rmse, 1e-6);
  EXPECT_LT(moment_recursion_general(c, huge).rmse, 1e-6);
  const Circuit ad = repeated_gate_circuit(pauli_x_unitary(), Channel(amplitude_damping(1e-3)), 10);
  EXPECT_LT(moment_recursion_general(ad, huge).rmse, 1e-6);
}

TEST(MomentRecursion, PauliRejectsGeneralChannel) {
  const Circuit ad = repeated_gate_circuit(pauli_x_unitary(), Channel(amplitude_damping(1e-3)), 3);
  EXPECT_THROW(moment_recursion_pauli(ad, 5000), std::invalid_argument);
}

TEST(MomentRecursion, SingleGateMatchesClosedForm) {
  // One step: Sigma_1 = Xi .* (G v0 v0^T G^T).
  const double eps = 0.01;
  const std::int64_t ns = 5000;
  const Circuit c = x_circuit(eps, 1);
  const PauliChannel ch = depolarizing(eps);
  const RealMatrix xi = residual_covariance(invert_pauli(ch), ch, ns);
  const RealVector gv = c.steps()[0].gate.apply(c.input().coeffs());
  const RealVector &o = c.observable().coeffs();
  const double expected = o.dot(xi.cwiseProduct(gv * gv.transpose()) * o);
  EXPECT_NEAR(std::pow(moment_recursion_pauli(c, ns).rmse, 2), expected, 1e-18);
}

// Every composition of `total` into `parts` nonnegative counts.
void for_each_composition(int total, int parts, std::vector<int> &cur,
                          const std::function<void(const std::vector<int> &)> &fn) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    cur.push_back(total);
    fn(cur);
    cur.pop_back();
    return;
  }
  for (int k = 0; k <= total; ++k) {
    cur.push_back(k);
    for_each_composition(total - k, parts, cur, fn);
    cur.pop_back();
  }
}

TEST(MomentRecursion, SingleGateMatchesMultinomialEnumeration) {
  for (double eps : {0.1, 0.3}) {
    for (std::int64_t ns : {1, 3}) {
      const PauliChannel ch = depolarizing(eps);
      const auto d = invert_pauli(ch);
      const int draws = static_cast<int>(draw_count(d, ns));
      const Circuit c = repeated_gate_circuit(rx_unitary(0.7), Channel(ch), 1);
      const double truth = run_noiseless(c);
      const RealVector cv = ch.diag().cwiseProduct(
          c.steps()[0].gate.apply(c.input().coeffs()));
      const RealVector &o = c.observable().coeffs();
      const RealVector &p = d.sampling_probs();

      double mean = 0.0;
      double mse = 0.0;
      std::vector<int> cur;
      for_each_composition(draws, 4, cur, [&](const std::vector<int> &k) {
        double logw = std::lgamma(draws + 1.0);
        RealVector alpha_t(4);
        for (int l = 0; l < 4; ++l) {
          logw -= std::lgamma(k[l] + 1.0);
          if (k[l] > 0) logw += k[l] * std::log(p[l]);
          alpha_t[l] = d.norm1() * d.signs()[l] * k[l] / draws;
        }
        const double w = std::exp(logw);
        const double r = o.dot(walsh_transform(alpha_t, 1).cwiseProduct(cv));
        mean += w * r;
        mse += w * (r - truth) * (r - truth);
      });
      EXPECT_NEAR(mean, truth, 1e-12);
      EXPECT_NEAR(moment_recursion_pauli(c, ns).rmse, std::sqrt(mse), 1e-12)
          << eps << " " << ns;
      EXPECT_NEAR(moment_recursion_general(c, ns).rmse, std::sqrt(mse), 1e-12);
    }
  }
}

TEST(MomentRecursion, GeneralAgreesWithPauli) {
  for (double eps : {1e-3, 1e-2}) {
    const Circuit c = repeated_gate_circuit(rx_unitary(0.25), Channel(depolarizing(eps)), 40);
    const std::vector<std::size_t> cps = {1, 20, 40};
    MomentOptions opts;
    opts.checkpoints = cps;
    const auto a = moment_recursion_pauli(c, 5000, opts);
    const auto b = moment_recursion_general(c, 5000, opts);
    EXPECT_NEAR(a.rmse, b.rmse, 1e-9);
    EXPECT_LT((a.state.second_moment - b.state.second_moment).cwiseAbs().maxCoeff(), 1e-9);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      EXPECT_NEAR(a.rmse_at_checkpoints[i], b.rmse_at_checkpoints[i], 1e-9);
    }
  }
}

TEST(MomentRecursion, InvariantsAlongTheCircuit) {
  const double eps = 1e-2;
  const std::int64_t ns = 500;
  const Circuit c = repeated_gate_circuit(rx_unitary(0.3), Channel(depolarizing(eps)), 60);
  const auto mean_path = [&] {
    std::vector<std::size_t> cps(61);
    std::iota(cps.begin(), cps.end(), 0);
    return noiseless_trajectory(c, cps);
  }();
  const PauliChannel ch = depolarizing(eps);
  const double xi_max = residual_covariance(invert_pauli(ch), ch, ns).cwiseAbs().maxCoeff();
  double prev_trace = c.input().coeffs().squaredNorm();
  RealVector mu = c.input().coeffs();
  for (int mode = 0; mode < 2; ++mode) {
    prev_trace = c.input().coeffs().squaredNorm();
    mu = c.input().coeffs();
    std::size_t steps = 0;
    MomentOptions opts;
    opts.on_step = [&](const MomentState &st) {
      ++steps;
      mu = c.steps()[st.k - 1].gate.apply(mu);
      EXPECT_LT((st.mu - mu).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_NEAR(c.observable().coeffs().dot(st.mu), mean_path[st.k], 1e-12);
      const Eigen::SelfAdjointEigenSolver<RealMatrix> es(st.covariance);
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
      const double tr = st.second_moment.trace();
      EXPECT_LE(tr, prev_trace * (1 + xi_max) + 1e-12);
      prev_trace = tr;
    };
    if (mode == 0) {
      moment_recursion_pauli(c, ns, opts);
    } else {
      moment_recursion_general(c, ns, opts);
    }
    EXPECT_EQ(steps, 60u);
  }
}

TEST(MomentRecursion, GeneralSingleGateMatchesMultinomialVariance) {
  for (double gamma : {1e-3, 0.2}) {
    const Circuit c =
        repeated_gate_circuit(rx_unitary(0.4), Channel(amplitude_damping(gamma)), 1);
    const QemPlan plan(c);
    const auto &d = *plan.decomposition(0);
    const RealVector w =
        apply_channel(*c.steps()[0].noise, c.steps()[0].gate.apply(c.input().coeffs()));
    const auto draws = static_cast<double>(draw_count(d, 7));
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t l : d.support()) {
      const double p = d.sampling_probs()[static_cast<Eigen::Index>(l)];
      const double a = c.observable().coeffs().dot(d.basis().apply(l, w));
      m1 += p * d.signs()[static_cast<Eigen::Index>(l)] * a;
      m2 += p * a * a;
    }
    const double expected = d.norm1() * std::sqrt((m2 - m1 * m1) / draws);
    EXPECT_NEAR(moment_recursion_general(c, 7).rmse, expected, 1e-12 + 1e-9 * expected);
  }
}

TEST(MomentRecursion, AmplitudeDampingMatchesEmpirical) {
  const Circuit c = repeated_gate_circuit(pauli_x_unitary(), Channel(amplitude_damping(1e-3)), 10);
  const double truth = run_noiseless(c);
  const int trials = 10000;
  std::vector<double> xs(trials);
  for (int t = 0; t < trials; ++t) {
    xs[static_cast<std::size_t>(t)] =
        run_mc_qem_empirical(c, 5000, {23, static_cast<std::uint64_t>(t)}).value;
  }
  const Moments m = sample_moments(xs, truth);
  EXPECT_LE(std::abs(m.mean - truth), 4 * m.sd / std::sqrt(trials));
  EXPECT_NEAR(m.rmse / moment_recursion_general(c, 5000).rmse, 1.0, 0.03);
}

TEST(IntrinsicVariance, Examples) {
  const Observable z = observable_to_ptm(testing::sigma(3));
  EXPECT_NEAR(intrinsic_variance(z, PtmState::zero_state(1)), 0.0, 1e-15);
  EXPECT_NEAR(intrinsic_variance(z, PtmState::maximally_mixed(1)), 1.0, 1e-15);
  EXPECT_NEAR(intrinsic_variance(z, PtmState::plus_state(1)), 1.0, 1e-15);
  EXPECT_THROW(intrinsic_variance(observable_to_ptm(ComplexMatrix::Identity(2, 2)),
                                  PtmState::zero_state(1)),
               std::invalid_argument);
  const ComplexMatrix wide =
      0.7 * (testing::kron(testing::sigma(0), testing::sigma(3)) +
             testing::kron(testing::sigma(3), testing::sigma(0)));
  EXPECT_THROW(intrinsic_variance(observable_to_ptm(wide), PtmState::zero_state(2)),
               std::invalid_argument);
  EXPECT_NEAR(shot_limited_mse(0.1, 0.5, 100), 0.01 + 0.005, 1e-15);
}

TEST(IntrinsicVariance, PauliObservableMatchesOperatorVariance) {
  // For a single Pauli string, the formula is Tr(P^2 rho) - Tr(P rho)^2.
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const ComplexMatrix rho = testing::random_density(4, rng);
    const std::size_t idx = 1 + static_cast<std::size_t>(t) % 15;
    const ComplexMatrix p = pauli_matrix(PauliIndex(idx, 2));
    const double e = (p * rho).trace().real();
    EXPECT_NEAR(intrinsic_variance(observable_to_ptm(p), density_to_ptm(rho)), 1 - e * e,
                1e-12);
  }
}

}  // namespace
}  // namespace qem
