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

#include "qem/quasiprob.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace qem {

namespace {

constexpr double kReconstructionTolerance = 1e-9;

// Column l of the Walsh matrix as +-1 entries.
RealVector walsh_column(std::size_t l, std::size_t dim) {
  RealVector w(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    w[static_cast<Eigen::Index>(j)] = paulis_anticommute(l, j) ? -1.0 : 1.0;
  }
  return w;
}

void check_reconstruction(const QuasiProbDecomposition &d,
                          const RealMatrix &channel) {
  const RealMatrix residual =
      d.reconstruct() * channel -
      RealMatrix::Identity(channel.rows(), channel.cols());
  if (residual.cwiseAbs().maxCoeff() > kReconstructionTolerance) {
    throw std::runtime_error("quasi-probability reconstruction failed");
  }
}

}  // namespace

OperationBasis::OperationBasis(int num_qubits, std::size_t size)
    : size_(size), num_qubits_(num_qubits) {}

OperationBasis OperationBasis::pauli(int num_qubits) {
  return OperationBasis(num_qubits, pauli_dimension(num_qubits));
}

OperationBasis::OperationBasis(std::vector<PtmOperator> ops)
    : ops_(std::move(ops)) {
  if (ops_.empty()) throw std::invalid_argument("OperationBasis: empty");
  size_ = ops_.size();
  num_qubits_ = ops_.front().num_qubits();
  for (const auto &op : ops_) {
    if (op.num_qubits() != num_qubits_) {
      throw std::invalid_argument("OperationBasis: qubit count mismatch");
    }
    trace_preserving_ = trace_preserving_ && op.is_trace_preserving(1e-12);
  }
}

PtmOperator OperationBasis::op(std::size_t l) const {
  if (l >= size_) throw std::out_of_range("OperationBasis: index");
  if (!is_pauli()) return ops_[l];
  return PtmOperator(
      RealMatrix(walsh_column(l, pauli_dimension(num_qubits_)).asDiagonal()));
}

RealVector OperationBasis::apply(std::size_t l, const RealVector &v) const {
  if (l >= size_) throw std::out_of_range("OperationBasis: index");
  if (!is_pauli()) return ops_[l].matrix() * v;
  RealVector out = v;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    if (paulis_anticommute(l, static_cast<std::size_t>(j))) out[j] = -out[j];
  }
  return out;
}

RealVector OperationBasis::apply_transpose(std::size_t l,
                                           const RealVector &v) const {
  if (is_pauli()) return apply(l, v);
  if (l >= size_) throw std::out_of_range("OperationBasis: index");
  return ops_[l].matrix().transpose() * v;
}

RealMatrix OperationBasis::combine(const RealVector &weights) const {
  if (static_cast<std::size_t>(weights.size()) != size_) {
    throw std::invalid_argument("OperationBasis: weight count mismatch");
  }
  const auto dim = static_cast<Eigen::Index>(pauli_dimension(num_qubits_));
  if (is_pauli()) {
    return RealMatrix(walsh_transform(weights, num_qubits_).asDiagonal());
  }
  RealMatrix out = RealMatrix::Zero(dim, dim);
  for (std::size_t l = 0; l < size_; ++l) {
    const double w = weights[static_cast<Eigen::Index>(l)];
    if (w != 0.0) out += w * ops_[l].matrix();
  }
  return out;
}

QuasiProbDecomposition::QuasiProbDecomposition(RealVector alpha,
                                               OperationBasis basis)
    : alpha_(std::move(alpha)), basis_(std::move(basis)) {
  if (static_cast<std::size_t>(alpha_.size()) != basis_.size()) {
    throw std::invalid_argument("QuasiProbDecomposition: size mismatch");
  }
  if (!alpha_.allFinite()) {
    throw std::invalid_argument("QuasiProbDecomposition: non-finite weight");
  }
  norm1_ = alpha_.cwiseAbs().sum();
  if (norm1_ == 0.0) {
    throw std::invalid_argument("QuasiProbDecomposition: zero weights");
  }
  probs_ = alpha_.cwiseAbs() / norm1_;
  signs_ = alpha_.unaryExpr([](double a) { return a < 0.0 ? -1.0 : 1.0; });
  for (Eigen::Index l = 0; l < probs_.size(); ++l) {
    if (probs_[l] > 0.0) support_.push_back(static_cast<std::size_t>(l));
  }
  if (basis_.all_trace_preserving()) {
    if (std::abs(alpha_.sum() - 1.0) > kReconstructionTolerance) {
      throw std::invalid_argument(
          "QuasiProbDecomposition: weights over a trace-preserving basis must "
          "sum to 1");
    }
  }
}

QuasiProbDecomposition invert_pauli(const PauliChannel &ch) {
  const RealVector &c = ch.diag();
  if (c.cwiseAbs().minCoeff() < 1e-12) {
    throw std::invalid_argument("invert_pauli: channel is not invertible");
  }
  const double scale = std::pow(4.0, -ch.num_qubits());
  RealVector alpha =
      scale * walsh_transform(c.cwiseInverse(), ch.num_qubits());
  QuasiProbDecomposition d(std::move(alpha),
                           OperationBasis::pauli(ch.num_qubits()));
  const RealVector gamma = walsh_transform(d.alpha(), ch.num_qubits());
  if ((gamma.cwiseProduct(c).array() - 1.0).abs().maxCoeff() > 1e-10) {
    throw std::runtime_error("invert_pauli: reconstruction failed");
  }
  return d;
}

QuasiProbDecomposition invert_general(const GeneralChannel &ch,
                                      const OperationBasis &basis) {
  if (basis.num_qubits() != ch.num_qubits()) {
    throw std::invalid_argument("invert_general: basis qubit count mismatch");
  }
  const RealMatrix &c = ch.ptm().matrix();
  const Eigen::FullPivLU<RealMatrix> lu(c);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("invert_general: channel PTM is singular");
  }
  const RealMatrix target = lu.inverse();

  const Eigen::Index dim2 = c.size();
  const auto count = static_cast<Eigen::Index>(basis.size());
  RealMatrix stacked(dim2, count);
  for (Eigen::Index l = 0; l < count; ++l) {
    const RealMatrix o = basis.op(static_cast<std::size_t>(l)).matrix();
    stacked.col(l) = o.reshaped();
  }
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(stacked);
  cod.setThreshold(1e-10);
  if (cod.rank() < dim2) {
    throw std::invalid_argument("invert_general: basis is rank deficient");
  }
  const RealVector rhs = target.reshaped();
  RealVector alpha = cod.solve(rhs);
  QuasiProbDecomposition d(std::move(alpha), basis);
  check_reconstruction(d, c);
  return d;
}

QuasiProbDecomposition invert_general(const GeneralChannel &ch,
                                      std::vector<PtmOperator> basis) {
  return invert_general(ch, OperationBasis(std::move(basis)));
}

std::vector<PtmOperator> default_single_qubit_basis() {
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;

  const std::vector<ComplexMatrix> kraus = {
      id,
      sx,
      sy,
      sz,
      r * (id + i * sx),
      r * (id + i * sy),
      r * (id + i * sz),
      r * (sy + sz),
      r * (sz + sx),
      r * (sx + sy),
      0.5 * (id + sx),
      0.5 * (id + sy),
      0.5 * (id + sz),
      0.5 * (sy + i * sz),
      0.5 * (sz + i * sx),
      0.5 * (sx + i * sy),
  };
  std::vector<PtmOperator> out;
  out.reserve(kraus.size());
  for (const auto &k : kraus) out.push_back(operation_to_ptm(k));

  RealMatrix stacked(16, 16);
  for (Eigen::Index l = 0; l < 16; ++l) {
    stacked.col(l) = out[static_cast<std::size_t>(l)].matrix().reshaped();
  }
  Eigen::FullPivLU<RealMatrix> lu(stacked);
  lu.setThreshold(1e-10);
  if (lu.rank() != 16) {
    throw std::logic_error("default_single_qubit_basis: rank is not 16");
  }
  return out;
}

QuasiProbDecomposition invert_channel(const Channel &ch) {
  if (const auto *p = std::get_if<PauliChannel>(&ch)) return invert_pauli(*p);
  const auto &g = std::get<GeneralChannel>(ch);
  if (g.num_qubits() != 1) {
    throw std::invalid_argument(
        "invert_channel: no default basis for multi-qubit general channels");
  }
  static const OperationBasis basis(default_single_qubit_basis());
  return invert_general(g, basis);
}

double sampling_overhead_factor(const QuasiProbDecomposition &d) {
  return d.norm1() * d.norm1();
}

std::int64_t total_overhead_exact(
    std::int64_t n0, std::span<const QuasiProbDecomposition> decomps) {
  if (n0 < 1) throw std::invalid_argument("total_overhead_exact: N0 < 1");
  double log_product = 0.0;
  for (const auto &d : decomps) {
    log_product += 2.0 * std::log(d.norm1());
  }
  const double extra =
      static_cast<double>(n0) * std::expm1(log_product);
  if (!(extra < static_cast<double>(kMaxOverheadSamples))) {
    throw std::overflow_error("total_overhead_exact: sample count overflow");
  }
  return std::llround(extra);
}

std::int64_t draw_count(const QuasiProbDecomposition &d, std::int64_t ns) {
  if (ns < 1) throw std::invalid_argument("draw_count: Ns < 1");
  const double n = static_cast<double>(ns) * sampling_overhead_factor(d);
  if (!(n < static_cast<double>(std::numeric_limits<std::int64_t>::max()))) {
    throw std::overflow_error("draw_count: overflow");
  }
  return std::max<std::int64_t>(1, std::llround(n));
}

EmpiricalDecomposition draw_empirical(const QuasiProbDecomposition &d,
                                      std::int64_t ns, Rng &rng) {
  const std::int64_t draws = draw_count(d, ns);
  const auto &support = d.support();
  std::vector<double> p(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    p[s] = d.sampling_probs()[static_cast<Eigen::Index>(support[s])];
  }
  std::vector<std::uint64_t> counts(support.size());
  sample_multinomial(rng, static_cast<std::uint64_t>(draws), p, counts);

  EmpiricalDecomposition emp;
  emp.draws = draws;
  emp.freq = RealVector::Zero(d.alpha().size());
  for (std::size_t s = 0; s < support.size(); ++s) {
    emp.freq[static_cast<Eigen::Index>(support[s])] =
        static_cast<double>(counts[s]) / static_cast<double>(draws);
  }
  emp.alpha_tilde = d.norm1() * d.signs().cwiseProduct(emp.freq);
  return emp;
}

RealVector residual_channel_pauli(const QuasiProbDecomposition &d,
                                  const EmpiricalDecomposition &emp,
                                  const PauliChannel &ch) {
  if (!d.basis().is_pauli() || d.basis().num_qubits() != ch.num_qubits() ||
      emp.alpha_tilde.size() != ch.diag().size()) {
    throw std::invalid_argument("residual_channel_pauli: mismatched inputs");
  }
  const RealVector exact = walsh_transform(d.alpha(), ch.num_qubits());
  if ((exact.cwiseProduct(ch.diag()).array() - 1.0).abs().maxCoeff() > 1e-9) {
    throw std::invalid_argument(
        "residual_channel_pauli: decomposition does not invert channel");
  }
  return walsh_transform(emp.alpha_tilde, ch.num_qubits())
      .cwiseProduct(ch.diag());
}

RealMatrix alpha_second_moment(const QuasiProbDecomposition &d,
                               std::int64_t ns) {
  const double n = static_cast<double>(draw_count(d, ns));
  RealMatrix e = (1.0 - 1.0 / n) * d.alpha() * d.alpha().transpose();
  const double w = sampling_overhead_factor(d) / n;
  for (std::size_t l : d.support()) {
    const auto i = static_cast<Eigen::Index>(l);
    e(i, i) += w * d.sampling_probs()[i];
  }
  return e;
}

RealMatrix residual_covariance(const QuasiProbDecomposition &d,
                               const PauliChannel &ch, std::int64_t ns) {
  if (!d.basis().is_pauli() || d.basis().num_qubits() != ch.num_qubits()) {
    throw std::invalid_argument("residual_covariance: mismatched inputs");
  }
  const auto dim = static_cast<Eigen::Index>(ch.dimension());
  const double n = static_cast<double>(draw_count(d, ns));
  RealMatrix wpw = RealMatrix::Zero(dim, dim);
  for (std::size_t l : d.support()) {
    const RealVector w = walsh_column(l, ch.dimension());
    wpw.noalias() += d.sampling_probs()[static_cast<Eigen::Index>(l)] * w *
                     w.transpose();
  }
  const RealVector &c = ch.diag();
  RealMatrix xi = sampling_overhead_factor(d) *
                      wpw.cwiseProduct(c * c.transpose()) -
                  RealMatrix::Ones(dim, dim);
  xi /= n;
  return xi;
}

}  // namespace qem
