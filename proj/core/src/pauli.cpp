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

#include "qem/pauli.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qem {

namespace {

using Complex = std::complex<double>;

constexpr std::uint64_t kLowBits = 0x5555555555555555ULL;

ComplexMatrix single_pauli(Pauli p) {
  ComplexMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

int qubits_from_hilbert_dimension(Eigen::Index dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if (static_cast<Eigen::Index>(hilbert_dimension(n)) == dim) return n;
  }
  throw std::invalid_argument(
      "matrix dimension " + std::to_string(dim) +
      " is not 2^n for a supported qubit count");
}

double max_abs(const ComplexMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const ComplexMatrix &m, const char *what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + " must be square");
  }
}

std::vector<ComplexMatrix> all_pauli_matrices(int n) {
  const std::size_t dim = pauli_dimension(n);
  std::vector<ComplexMatrix> out;
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.push_back(pauli_matrix(PauliIndex(i, n)));
  }
  return out;
}

// Tr(a b) without forming the product.
Complex trace_of_product(const ComplexMatrix &a, const ComplexMatrix &b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace

std::size_t pauli_dimension(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument(
        "qubit count " + std::to_string(num_qubits) + " outside [1, " +
        std::to_string(kMaxQubits) + "]");
  }
  return std::size_t{1} << (2 * num_qubits);
}

std::size_t hilbert_dimension(int num_qubits) {
  pauli_dimension(num_qubits);
  return std::size_t{1} << num_qubits;
}

int qubits_from_pauli_dimension(std::size_t dim) {
  for (int n = 1; n <= kMaxQubits; ++n) {
    if (pauli_dimension(n) == dim) return n;
  }
  throw std::invalid_argument(
      "dimension " + std::to_string(dim) +
      " is not 4^n for a supported qubit count");
}

PauliIndex::PauliIndex(std::size_t value, int num_qubits)
    : value_(value), num_qubits_(num_qubits) {
  if (value >= pauli_dimension(num_qubits)) {
    throw std::invalid_argument("Pauli index " + std::to_string(value) +
                                " out of range for " +
                                std::to_string(num_qubits) + " qubits");
  }
}

PauliIndex PauliIndex::from_digits(std::span<const Pauli> digits) {
  std::size_t value = 0;
  for (std::size_t q = digits.size(); q-- > 0;) {
    value = 4 * value + static_cast<std::size_t>(digits[q]);
  }
  return PauliIndex(value, static_cast<int>(digits.size()));
}

Pauli PauliIndex::digit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw std::out_of_range("qubit " + std::to_string(qubit) +
                            " out of range");
  }
  return static_cast<Pauli>((value_ >> (2 * qubit)) & 3U);
}

std::vector<Pauli> PauliIndex::digits() const {
  std::vector<Pauli> out(static_cast<std::size_t>(num_qubits_));
  for (int q = 0; q < num_qubits_; ++q) out[q] = digit(q);
  return out;
}

bool paulis_anticommute(std::size_t a, std::size_t b) noexcept {
  // Symplectic form with x = d0 ^ d1, z = d1 per digit.
  const std::uint64_t a0 = a & kLowBits, a1 = (a >> 1) & kLowBits;
  const std::uint64_t b0 = b & kLowBits, b1 = (b >> 1) & kLowBits;
  const std::uint64_t xa = a0 ^ a1, za = a1;
  const std::uint64_t xb = b0 ^ b1, zb = b1;
  return (std::popcount((xa & zb) ^ (za & xb)) & 1) != 0;
}

RealMatrix walsh_matrix(int num_qubits) {
  const std::size_t dim = pauli_dimension(num_qubits);
  RealMatrix w(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      w(i, j) = paulis_anticommute(i, j) ? -1.0 : 1.0;
    }
  }
  return w;
}

RealVector walsh_transform(const RealVector &x, int num_qubits) {
  const std::size_t dim = pauli_dimension(num_qubits);
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw std::invalid_argument("walsh_transform: length mismatch");
  }
  RealVector y = x;
  for (int q = 0; q < num_qubits; ++q) {
    const std::size_t s = std::size_t{1} << (2 * q);
    for (std::size_t block = 0; block < dim; block += 4 * s) {
      for (std::size_t i = block; i < block + s; ++i) {
        const double a = y[i], b = y[i + s], c = y[i + 2 * s], d = y[i + 3 * s];
        y[i] = a + b + c + d;
        y[i + s] = a + b - c - d;
        y[i + 2 * s] = a - b + c - d;
        y[i + 3 * s] = a - b - c + d;
      }
    }
  }
  return y;
}

ComplexMatrix pauli_matrix(const PauliIndex &index) {
  ComplexMatrix m = single_pauli(index.digit(0));
  for (int q = 1; q < index.num_qubits(); ++q) {
    m = kron(single_pauli(index.digit(q)), m);
  }
  return m;
}

PtmOperator::PtmOperator(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("PTM must be square");
  }
  num_qubits_ =
      qubits_from_pauli_dimension(static_cast<std::size_t>(entries_.rows()));
}

PtmOperator PtmOperator::identity(int num_qubits) {
  const auto dim = static_cast<Eigen::Index>(pauli_dimension(num_qubits));
  return PtmOperator(RealMatrix::Identity(dim, dim));
}

bool PtmOperator::is_trace_preserving(double tol) const {
  if (std::abs(entries_(0, 0) - 1.0) > tol) return false;
  return entries_.row(0).tail(entries_.cols() - 1).cwiseAbs().maxCoeff() <=
         tol;
}

bool PtmOperator::is_unitary_block(double tol) const {
  const Eigen::Index d = entries_.rows();
  if (!is_trace_preserving(tol)) return false;
  if (entries_.col(0).tail(d - 1).cwiseAbs().maxCoeff() > tol) return false;
  const RealMatrix q = entries_.bottomRightCorner(d - 1, d - 1);
  const RealMatrix gram = q.transpose() * q;
  return (gram - RealMatrix::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff() <=
         tol;
}

PtmOperator PtmOperator::operator*(const PtmOperator &rhs) const {
  if (rhs.num_qubits_ != num_qubits_) {
    throw std::invalid_argument("PTM product: qubit count mismatch");
  }
  return PtmOperator(entries_ * rhs.entries_);
}

namespace {

// Entry (row, row ^ xmask) of the Pauli string with index s.
Complex pauli_entry(std::size_t s, std::size_t row, int n) {
  Complex v(1.0, 0.0);
  for (int q = 0; q < n; ++q) {
    const auto d = static_cast<Pauli>((s >> (2 * q)) & 3U);
    const bool one = ((row >> q) & 1U) != 0;
    if (d == Pauli::Y) v *= one ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
    if (d == Pauli::Z && one) v = -v;
  }
  return v;
}

std::size_t pauli_xmask(std::size_t s, int n) {
  std::size_t m = 0;
  for (int q = 0; q < n; ++q) {
    const auto d = static_cast<Pauli>((s >> (2 * q)) & 3U);
    if (d == Pauli::X || d == Pauli::Y) m |= std::size_t{1} << q;
  }
  return m;
}

}  // namespace

ComplexMatrix PtmOperator::choi() const {
  // J = 2^-n sum_ij R_ij S_j^T (x) S_i. Each Pauli string has one nonzero per
  // row, so every term adds 4^n entries.
  const int n = num_qubits_;
  const std::size_t h = hilbert_dimension(n);
  const std::size_t dim = h * h;
  const double scale = std::pow(2.0, -n);
  ComplexMatrix j = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t xj = pauli_xmask(c, n);
    for (std::size_t r = 0; r < dim; ++r) {
      const double w = entries_(static_cast<Eigen::Index>(r),
                                static_cast<Eigen::Index>(c));
      if (w == 0.0) continue;
      const std::size_t xi = pauli_xmask(r, n);
      for (std::size_t ra = 0; ra < h; ++ra) {
        const std::size_t ca = ra ^ xj;
        const Complex va = pauli_entry(c, ca, n);  // S_j^T(ra, ca) = S_j(ca, ra)
        for (std::size_t rb = 0; rb < h; ++rb) {
          const std::size_t cb = rb ^ xi;
          j(static_cast<Eigen::Index>(ra * h + rb),
            static_cast<Eigen::Index>(ca * h + cb)) +=
              scale * w * va * pauli_entry(r, rb, n);
        }
      }
    }
  }
  return j;
}

bool PtmOperator::is_completely_positive(double tol) const {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(choi(),
                                                        Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

PtmState::PtmState(RealVector coeffs) : coeffs_(std::move(coeffs)) {
  num_qubits_ =
      qubits_from_pauli_dimension(static_cast<std::size_t>(coeffs_.size()));
  const double lead = std::pow(2.0, -0.5 * num_qubits_);
  if (std::abs(coeffs_[0] - lead) > kMatrixTolerance) {
    throw std::invalid_argument("PtmState: trace coefficient must be 2^(-n/2)");
  }
  if (coeffs_.squaredNorm() > 1.0 + 1e-9) {
    throw std::invalid_argument("PtmState: purity exceeds one");
  }
}

namespace {

RealVector product_state(int n, Pauli allowed) {
  const std::size_t dim = pauli_dimension(n);
  RealVector v = RealVector::Zero(static_cast<Eigen::Index>(dim));
  const double value = std::pow(2.0, -0.5 * n);
  for (std::size_t i = 0; i < dim; ++i) {
    bool keep = true;
    for (int q = 0; q < n && keep; ++q) {
      const auto d = static_cast<Pauli>((i >> (2 * q)) & 3U);
      keep = d == Pauli::I || d == allowed;
    }
    if (keep) v[static_cast<Eigen::Index>(i)] = value;
  }
  return v;
}

}  // namespace

PtmState PtmState::zero_state(int num_qubits) {
  return PtmState(product_state(num_qubits, Pauli::Z));
}

PtmState PtmState::plus_state(int num_qubits) {
  return PtmState(product_state(num_qubits, Pauli::X));
}

PtmState PtmState::maximally_mixed(int num_qubits) {
  return PtmState(product_state(num_qubits, Pauli::I));
}

Observable::Observable(RealVector coeffs) : coeffs_(std::move(coeffs)) {
  num_qubits_ =
      qubits_from_pauli_dimension(static_cast<std::size_t>(coeffs_.size()));
  if (coeffs_.squaredNorm() >
      std::pow(2.0, num_qubits_) * (1.0 + 1e-9)) {
    throw std::invalid_argument("Observable: l2 norm exceeds 2^(n/2)");
  }
}

ComplexMatrix Observable::to_matrix() const {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(num_qubits_));
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  const double scale = std::pow(2.0, -0.5 * num_qubits_);
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    m += scale * coeffs_[i] *
         pauli_matrix(PauliIndex(static_cast<std::size_t>(i), num_qubits_));
  }
  return m;
}

double Observable::spectral_radius() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(to_matrix(),
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

PtmOperator unitary_to_ptm(const ComplexMatrix &u) {
  require_square(u, "unitary");
  const ComplexMatrix gram = u * u.adjoint();
  if (max_abs(gram - ComplexMatrix::Identity(u.rows(), u.cols())) >
      kMatrixTolerance) {
    throw std::invalid_argument("unitary_to_ptm: matrix is not unitary");
  }
  return operation_to_ptm(u);
}

PtmOperator operation_to_ptm(const ComplexMatrix &k) {
  require_square(k, "operation");
  const int n = qubits_from_hilbert_dimension(k.rows());
  const auto paulis = all_pauli_matrices(n);
  const auto dim = static_cast<Eigen::Index>(paulis.size());
  const double scale = std::pow(2.0, -n);
  RealMatrix out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const ComplexMatrix image = k * paulis[j] * k.adjoint();
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Complex t = scale * trace_of_product(paulis[i], image);
      if (std::abs(t.imag()) > kMatrixTolerance) {
        throw std::logic_error("operation_to_ptm: non-real PTM entry");
      }
      out(i, j) = t.real();
    }
  }
  return PtmOperator(std::move(out));
}

PtmState density_to_ptm(const ComplexMatrix &rho) {
  require_square(rho, "density matrix");
  const int n = qubits_from_hilbert_dimension(rho.rows());
  if (max_abs(rho - rho.adjoint()) > kMatrixTolerance) {
    throw std::invalid_argument("density_to_ptm: matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kMatrixTolerance) {
    throw std::invalid_argument("density_to_ptm: trace is not one");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho,
                                                      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kMatrixTolerance) {
    throw std::invalid_argument("density_to_ptm: negative eigenvalue");
  }
  const auto paulis = all_pauli_matrices(n);
  const double scale = std::pow(2.0, -0.5 * n);
  RealVector v(static_cast<Eigen::Index>(paulis.size()));
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        scale * trace_of_product(paulis[i], rho).real();
  }
  v[0] = scale;  // exact unit trace
  return PtmState(std::move(v));
}

Observable observable_to_ptm(const ComplexMatrix &m, bool strict) {
  require_square(m, "observable");
  const int n = qubits_from_hilbert_dimension(m.rows());
  if (max_abs(m - m.adjoint()) > kMatrixTolerance) {
    throw std::invalid_argument("observable_to_ptm: matrix is not Hermitian");
  }
  if (strict) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m,
                                                        Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + kMatrixTolerance) {
      throw std::invalid_argument(
          "observable_to_ptm: eigenvalue outside [-1, 1]");
    }
  }
  const auto paulis = all_pauli_matrices(n);
  const double scale = std::pow(2.0, -0.5 * n);
  RealVector v(static_cast<Eigen::Index>(paulis.size()));
  for (std::size_t i = 0; i < paulis.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        scale * trace_of_product(paulis[i], m).real();
  }
  return Observable(std::move(v));
}

double expectation(const Observable &obs, const PtmState &state) {
  return expectation(obs, state.coeffs());
}

double expectation(const Observable &obs, const RealVector &state) {
  if (obs.coeffs().size() != state.size()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  return obs.coeffs().dot(state);
}

LocalMap::LocalMap(RealMatrix local, std::vector<int> qubits, int num_qubits)
    : local_(std::move(local)),
      qubits_(std::move(qubits)),
      num_qubits_(num_qubits) {
  const std::size_t dim = pauli_dimension(num_qubits);
  if (qubits_.empty()) {
    throw std::invalid_argument("LocalMap: empty support");
  }
  std::uint64_t mask = 0;
  for (int q : qubits_) {
    if (q < 0 || q >= num_qubits) {
      throw std::invalid_argument("LocalMap: qubit out of range");
    }
    const std::uint64_t bits = std::uint64_t{3} << (2 * q);
    if (mask & bits) throw std::invalid_argument("LocalMap: repeated qubit");
    mask |= bits;
  }
  const std::size_t local_dim = std::size_t{1} << (2 * qubits_.size());
  if (static_cast<std::size_t>(local_.rows()) != local_dim ||
      static_cast<std::size_t>(local_.cols()) != local_dim) {
    throw std::invalid_argument("LocalMap: local matrix has wrong shape");
  }
  offsets_.resize(local_dim);
  for (std::size_t j = 0; j < local_dim; ++j) {
    std::size_t off = 0;
    for (std::size_t t = 0; t < qubits_.size(); ++t) {
      off += ((j >> (2 * t)) & 3U) << (2 * qubits_[t]);
    }
    offsets_[j] = off;
  }
  bases_.reserve(dim / local_dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & mask) == 0) bases_.push_back(i);
  }
}

RealVector LocalMap::apply_with(const RealMatrix &m, const RealVector &v) const {
  if (static_cast<std::size_t>(v.size()) != pauli_dimension(num_qubits_)) {
    throw std::invalid_argument("LocalMap: dimension mismatch");
  }
  const auto k = static_cast<Eigen::Index>(offsets_.size());
  RealVector out(v.size());
  RealVector g(k), h(k);
  for (std::size_t base : bases_) {
    for (Eigen::Index j = 0; j < k; ++j) g[j] = v[base + offsets_[j]];
    h.noalias() = m * g;
    for (Eigen::Index j = 0; j < k; ++j) out[base + offsets_[j]] = h[j];
  }
  return out;
}

RealVector LocalMap::apply(const RealVector &v) const {
  return apply_with(local_, v);
}

RealVector LocalMap::apply_transpose(const RealVector &v) const {
  return apply_with(local_.transpose(), v);
}

RealMatrix LocalMap::apply_columns(const RealMatrix &a) const {
  if (static_cast<std::size_t>(a.rows()) != pauli_dimension(num_qubits_)) {
    throw std::invalid_argument("LocalMap: dimension mismatch");
  }
  const auto k = static_cast<Eigen::Index>(offsets_.size());
  RealMatrix out(a.rows(), a.cols());
  RealMatrix g(k, a.cols()), h(k, a.cols());
  for (std::size_t base : bases_) {
    for (Eigen::Index j = 0; j < k; ++j) {
      g.row(j) = a.row(static_cast<Eigen::Index>(base + offsets_[j]));
    }
    h.noalias() = local_ * g;
    for (Eigen::Index j = 0; j < k; ++j) {
      out.row(static_cast<Eigen::Index>(base + offsets_[j])) = h.row(j);
    }
  }
  return out;
}

RealMatrix LocalMap::conjugate(const RealMatrix &a) const {
  const RealMatrix left = apply_columns(a);
  return apply_columns(left.transpose()).transpose();
}

PtmOperator LocalMap::embed() const {
  const auto dim = static_cast<Eigen::Index>(pauli_dimension(num_qubits_));
  RealMatrix out = RealMatrix::Zero(dim, dim);
  const auto k = static_cast<Eigen::Index>(offsets_.size());
  for (std::size_t base : bases_) {
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) {
        out(static_cast<Eigen::Index>(base + offsets_[r]),
            static_cast<Eigen::Index>(base + offsets_[c])) = local_(r, c);
      }
    }
  }
  return PtmOperator(std::move(out));
}

}  // namespace qem
