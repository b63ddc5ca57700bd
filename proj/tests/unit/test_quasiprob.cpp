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
#include <vector>

#include <gtest/gtest.h>

#include "qem/bounds.hpp"
#include "qem/quasiprob.hpp"

namespace qem {
namespace {

double max_abs(const RealMatrix &m) { return m.cwiseAbs().maxCoeff(); }

TEST(InvertPauli, IdentityChannel) {
  const auto d = invert_pauli(PauliChannel::identity(1));
  EXPECT_EQ(d.alpha(), RealVector::Unit(4, 0));
  EXPECT_EQ(d.norm1(), 1.0);
  EXPECT_EQ(sampling_overhead_factor(d), 1.0);
}

TEST(InvertPauli, DepolarizingClosedForm) {
  for (double eps : {1e-4, 1e-3, 1e-2, 0.1}) {
    const double c = 1 - 4 * eps / 3;
    const auto d = invert_pauli(depolarizing(eps));
    EXPECT_NEAR(d.norm1(), (3 / c - 1) / 2, 1e-14);
    EXPECT_NEAR(d.alpha()[0], (1 + 3 / c) / 4, 1e-14);
    EXPECT_GT(d.alpha()[0], 1.0);
    for (int l = 1; l < 4; ++l) {
      EXPECT_LT(d.alpha()[l], 0.0);
      EXPECT_NEAR(d.alpha()[l], d.alpha()[1], 1e-16);
    }
    EXPECT_NEAR(d.alpha().sum(), 1.0, 1e-12);
  }
  const auto d = invert_pauli(depolarizing(1e-3));
  EXPECT_NEAR(d.norm1(), 1.00200267, 1e-8);
  EXPECT_NEAR(sampling_overhead_factor(d), 1.0040094, 1e-7);
  EXPECT_NEAR(sampling_overhead_factor(d), 1 + 4e-3, 1e-5);
}

TEST(InvertPauli, StructureInvariants) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u;
  for (int n = 1; n <= 2; ++n) {
    const auto dim = static_cast<Eigen::Index>(pauli_dimension(n));
    for (int t = 0; t < 20; ++t) {
      RealVector p(dim);
      for (auto &x : p) x = u(rng);
      p[0] += 10.0 * static_cast<double>(dim);
      p /= p.sum();
      const PauliChannel ch(p);
      const auto d = invert_pauli(ch);
      EXPECT_LT(max_abs(d.reconstruct() * ch.ptm().matrix() - RealMatrix::Identity(dim, dim)),
                1e-9);
      EXPECT_LT(max_abs(walsh_transform(d.alpha(), n) - ch.diag().cwiseInverse()), 1e-10);
      EXPECT_NEAR(d.sampling_probs().sum(), 1.0, 1e-12);
      EXPECT_TRUE((d.sampling_probs().array() >= 0).all());
      EXPECT_LT(max_abs(d.alpha() - d.norm1() * d.signs().cwiseProduct(d.sampling_probs())),
                1e-15);
      EXPECT_GT(d.norm1(), 1.0 + 1e-12);
    }
  }
}

TEST(InvertPauli, RejectsSingularChannel) {
  RealVector p(4);
  p << 0.5, 0.5, 0, 0;
  EXPECT_THROW(invert_pauli(PauliChannel(p)), std::invalid_argument);
}

TEST(DefaultBasis, Properties) {
  const auto basis = default_single_qubit_basis();
  ASSERT_EQ(basis.size(), 16u);
  EXPECT_TRUE(basis.front().matrix().isIdentity(0.0));
  RealMatrix stacked(16, 16);
  for (int l = 0; l < 16; ++l) {
    stacked.col(l) = basis[static_cast<std::size_t>(l)].matrix().reshaped();
    Eigen::JacobiSVD<RealMatrix> svd(basis[static_cast<std::size_t>(l)].matrix());
    EXPECT_LE(svd.singularValues()[0], 1.0 + 1e-12) << l;
  }
  EXPECT_EQ(Eigen::FullPivLU<RealMatrix>(stacked).rank(), 16);
}

TEST(InvertGeneral, IdentityChannelIsIndicator) {
  const GeneralChannel id{PtmOperator::identity(1)};
  const auto d = invert_general(id, default_single_qubit_basis());
  EXPECT_LT(max_abs(d.alpha() - RealVector::Unit(16, 0)), 1e-12);
}

TEST(InvertGeneral, AmplitudeDampingReconstruction) {
  for (double g : {1e-3, 0.1, 0.5}) {
    const GeneralChannel ch = amplitude_damping(g);
    const auto d = invert_general(ch, default_single_qubit_basis());
    EXPECT_LT(max_abs(d.reconstruct() * ch.ptm().matrix() - RealMatrix::Identity(4, 4)), 1e-10);
    EXPECT_GE(d.norm1(), 1.0);
    const auto via_channel = invert_channel(Channel(ch));
    EXPECT_LT(max_abs(via_channel.alpha() - d.alpha()), 1e-12);
  }
}

TEST(InvertGeneral, RejectsRankDeficientBasisAndSingularChannel) {
  auto basis = default_single_qubit_basis();
  basis.pop_back();
  EXPECT_THROW(invert_general(amplitude_damping(1e-3), basis), std::invalid_argument);
  EXPECT_THROW(invert_general(amplitude_damping(1.0), default_single_qubit_basis()),
               std::invalid_argument);
}

TEST(Overhead, TotalExact) {
  const std::vector<QuasiProbDecomposition> ids(5, invert_pauli(PauliChannel::identity(1)));
  EXPECT_EQ(total_overhead_exact(5000, ids), 0);

  const auto d = invert_pauli(depolarizing(1e-3));
  const std::vector<QuasiProbDecomposition> ten(10, d);
  const double f = sampling_overhead_factor(d);
  EXPECT_EQ(total_overhead_exact(5000, ten), std::llround(5000 * (std::pow(f, 10) - 1)));
  EXPECT_NEAR(static_cast<double>(total_overhead_exact(5000, ten)), 204, 1.0);
  const std::vector<QuasiProbDecomposition> one(1, d);
  EXPECT_EQ(total_overhead_exact(5000, one), std::llround(5000 * (f - 1)));

  const std::vector<QuasiProbDecomposition> many(100000, invert_pauli(depolarizing(0.1)));
  EXPECT_THROW(total_overhead_exact(5000, many), std::overflow_error);
  EXPECT_THROW(total_overhead_exact(0, one), std::invalid_argument);
}

TEST(DrawEmpirical, IdentityIsDegenerate) {
  const auto d = invert_pauli(PauliChannel::identity(1));
  Rng rng(1);
  const auto emp = draw_empirical(d, 5000, rng);
  EXPECT_EQ(emp.freq, RealVector::Unit(4, 0));
  EXPECT_EQ(emp.draws, 5000);
}

TEST(DrawEmpirical, DeterministicAndLattice) {
  const auto d = invert_pauli(depolarizing(1e-2));
  Rng a(99);
  Rng b(99);
  const auto ea = draw_empirical(d, 5000, a);
  const auto eb = draw_empirical(d, 5000, b);
  EXPECT_EQ(ea.freq, eb.freq);
  EXPECT_EQ(ea.draws, draw_count(d, 5000));
  double total = 0;
  for (double f : ea.freq) {
    const double k = f * static_cast<double>(ea.draws);
    EXPECT_NEAR(k, std::round(k), 1e-9);
    total += std::round(k);
  }
  EXPECT_EQ(total, static_cast<double>(ea.draws));
}

TEST(DrawEmpirical, LargeSampleConvergesToProbabilities) {
  const auto d = invert_pauli(depolarizing(1e-2));
  Rng rng(5);
  const auto emp = draw_empirical(d, 1000000, rng);
  const double n = static_cast<double>(emp.draws);
  for (Eigen::Index l = 0; l < 4; ++l) {
    const double p = d.sampling_probs()[l];
    EXPECT_LE(std::abs(emp.freq[l] - p), 3 * std::sqrt(p * (1 - p) / n) + 1e-15) << l;
  }
}

TEST(DrawEmpirical, AlphaTildeIsUnbiased) {
  const auto d = invert_pauli(depolarizing(1e-2));
  const int trials = 10000;
  RealVector sum = RealVector::Zero(4);
  RealVector sq = RealVector::Zero(4);
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_stream(3, static_cast<std::uint64_t>(t));
    const auto emp = draw_empirical(d, 200, rng);
    sum += emp.alpha_tilde;
    sq += emp.alpha_tilde.cwiseAbs2();
  }
  const RealVector mean = sum / trials;
  for (Eigen::Index l = 0; l < 4; ++l) {
    const double sd = std::sqrt(sq[l] / trials - mean[l] * mean[l]);
    EXPECT_LE(std::abs(mean[l] - d.alpha()[l]), 4 * sd / std::sqrt(trials) + 1e-15) << l;
  }
}

TEST(ResidualChannel, ExactFrequenciesGiveOnes) {
  const PauliChannel ch = depolarizing(1e-3);
  const auto d = invert_pauli(ch);
  EmpiricalDecomposition emp;
  emp.freq = d.sampling_probs();
  emp.alpha_tilde = d.alpha();
  emp.draws = 1;
  EXPECT_LT(max_abs(residual_channel_pauli(d, emp, ch).array() - 1.0), 1e-12);
  EXPECT_THROW(residual_channel_pauli(d, emp, depolarizing(1e-2)), std::invalid_argument);
}

TEST(ResidualChannel, CovarianceMatchesMonteCarlo) {
  const PauliChannel ch = depolarizing(1e-3);
  const auto d = invert_pauli(ch);
  const std::int64_t ns = 5000;
  const RealMatrix xi = residual_covariance(d, ch, ns);

  const int trials = 100000;
  RealVector sum = RealVector::Zero(4);
  RealMatrix outer = RealMatrix::Zero(4, 4);
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_stream(8, static_cast<std::uint64_t>(t));
    const RealVector c = residual_channel_pauli(d, draw_empirical(d, ns, rng), ch);
    sum += c;
    outer += c * c.transpose();
  }
  const RealVector mean = sum / trials;
  const RealMatrix cov = outer / trials - mean * mean.transpose();

  // E{c~} = 1 within 4 sigma.
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double sd = std::sqrt(std::max(0.0, cov(i, i)));
    EXPECT_LE(std::abs(mean[i] - 1.0), 4 * sd / std::sqrt(trials) + 1e-15) << i;
  }
  // Entries resolvable at this trial count match to 5%. The off-diagonal
  // entries are O(eps^2) and sit far below the estimator noise, so they are
  // held to a 4 standard error band instead.
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double se = std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / trials);
      if (std::abs(xi(i, j)) <= 1e-12) {
        EXPECT_LE(std::abs(cov(i, j)), 1e-12);
      } else if (std::abs(xi(i, j)) > 20 * se) {
        EXPECT_NEAR(cov(i, j) / xi(i, j), 1.0, 0.05) << i << "," << j;
      } else {
        EXPECT_LE(std::abs(cov(i, j) - xi(i, j)), 4 * se) << i << "," << j;
      }
    }
  }
}

TEST(ResidualChannel, CovarianceProperties) {
  const std::int64_t ns = 5000;
  EXPECT_EQ(max_abs(residual_covariance(invert_pauli(PauliChannel::identity(1)),
                                        PauliChannel::identity(1), ns)),
            0.0);
  for (double eps : {1e-4, 1e-3, 1e-2}) {
    const PauliChannel ch = depolarizing(eps);
    const auto d = invert_pauli(ch);
    const RealMatrix xi = residual_covariance(d, ch, ns);
    EXPECT_LT(max_abs(xi - xi.transpose()), 1e-18);
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(xi);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
    EXPECT_LE(max_abs(xi), 2.0 / static_cast<double>(ns));
    EXPECT_LE(max_abs(xi), eps_tilde(eps) / static_cast<double>(ns));
    EXPECT_LT(max_abs(residual_covariance(d, ch, 1000 * ns)), max_abs(xi) / 500);
  }
}

TEST(ResidualChannel, DeviationShrinksAsInverseSqrtDraws) {
  const PauliChannel ch = depolarizing(1e-2);
  const auto d = invert_pauli(ch);
  std::vector<double> log_n;
  std::vector<double> log_sd;
  for (std::int64_t ns : {100, 1000, 10000}) {
    const int trials = 4000;
    double sq = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_stream(ns, static_cast<std::uint64_t>(t));
      const RealVector c = residual_channel_pauli(d, draw_empirical(d, ns, rng), ch);
      sq += (c[3] - 1.0) * (c[3] - 1.0);
    }
    log_n.push_back(std::log(static_cast<double>(draw_count(d, ns))));
    log_sd.push_back(0.5 * std::log(sq / trials));
  }
  const double slope = (log_sd.back() - log_sd.front()) / (log_n.back() - log_n.front());
  EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST(AlphaSecondMoment, MatchesDefinition) {
  const auto d = invert_pauli(depolarizing(1e-2));
  const std::int64_t ns = 50;
  const double n = static_cast<double>(draw_count(d, ns));
  const RealMatrix e = alpha_second_moment(d, ns);
  const RealVector p = d.sampling_probs();
  const RealMatrix expected = d.alpha() * d.alpha().transpose() +
                              (d.norm1() * d.norm1() / n) *
                                  (RealMatrix(p.asDiagonal()) - p * p.transpose())
                                      .cwiseProduct(d.signs() * d.signs().transpose());
  EXPECT_LT(max_abs(e - expected), 1e-14);
}

}  // namespace
}  // namespace qem
