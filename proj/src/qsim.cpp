// Copyright 2026 The pecsim Authors
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

#include "pecsim/qsim.hpp"

#include "pecsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pecsim {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = 1e-10;
constexpr double kNegativeClamp = 1e-12;

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw InvalidInput("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                       std::to_string(n_qubits));
  }
}

/// Positions of the bits a target list occupies within a basis index.
std::vector<std::uint64_t> target_masks(std::span<const int> targets, int n_qubits) {
  std::vector<std::uint64_t> masks(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    masks[j] = std::uint64_t{1} << (n_qubits - 1 - targets[j]);
  }
  return masks;
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

std::string to_bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if (qubit_bit(index, q, n_qubits)) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

std::uint64_t bitstring_index(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw InvalidInput("bitstring length out of range");
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidInput("bitstring contains '" + std::string(1, c) + "'");
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return index;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::basis_state(int n_qubits, std::uint64_t index) {
  check_qubit_count(n_qubits);
  const auto dim = Eigen::Index{1} << n_qubits;
  if (index >= static_cast<std::uint64_t>(dim)) throw InvalidInput("basis index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  check_qubit_count(n_qubits);
  const auto dim = Eigen::Index{1} << n_qubits;
  Matrix m = Matrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(Matrix data) {
  if (data.rows() != data.cols()) throw InvalidInput("density matrix must be square");
  int n = 0;
  while ((Eigen::Index{1} << n) < data.rows()) ++n;
  if ((Eigen::Index{1} << n) != data.rows()) throw InvalidInput("dimension is not a power of two");
  check_qubit_count(n);
  const Complex tr = data.trace();
  if (std::abs(tr - 1.0) > kTraceTol) throw InvalidInput("trace differs from 1");
  if ((data - data.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw InvalidInput("density matrix is not Hermitian");
  }
  return DensityMatrix(n, std::move(data));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(data_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  if (std::abs(data_.trace() - 1.0) > kTraceTol) throw InvalidInput("trace differs from 1");
  if ((data_ - data_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw InvalidInput("density matrix is not Hermitian");
  }
  if (min_eigenvalue() < -kPsdTol) throw InvalidInput("density matrix is not positive semidefinite");
}

// ---------------------------------------------------------------------------
// Gates and channels

namespace detail {

void check_targets(std::span<const int> targets, int n_qubits) {
  if (targets.empty()) throw InvalidInput("operator needs at least one target");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw InvalidInput("target qubit " + std::to_string(targets[i]) + " out of range");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw InvalidInput("duplicate target qubit");
    }
  }
}

void apply_left(Matrix& m, const Matrix& op, std::span<const int> targets, int n_qubits) {
  const std::size_t k = targets.size();
  const std::uint64_t local_dim = std::uint64_t{1} << k;
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const auto masks = target_masks(targets, n_qubits);
  std::uint64_t target_mask = 0;
  for (auto b : masks) target_mask |= b;

  // offsets[l]: bits that local index l sets in a full index.
  std::vector<std::uint64_t> offsets(local_dim, 0);
  for (std::uint64_t l = 0; l < local_dim; ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) offsets[l] |= masks[j];
    }
  }

  std::vector<Complex> in(local_dim);
  const auto cols = static_cast<Eigen::Index>(m.cols());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & target_mask) continue;
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (std::uint64_t l = 0; l < local_dim; ++l) {
        in[l] = m(static_cast<Eigen::Index>(base | offsets[l]), c);
      }
      for (std::uint64_t r = 0; r < local_dim; ++r) {
        Complex acc = 0.0;
        for (std::uint64_t l = 0; l < local_dim; ++l) {
          acc += op(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) * in[l];
        }
        m(static_cast<Eigen::Index>(base | offsets[r]), c) = acc;
      }
    }
  }
}

void conjugate(Matrix& m, const Matrix& op, std::span<const int> targets, int n_qubits) {
  apply_left(m, op, targets, n_qubits);
  Matrix t = m.adjoint();
  apply_left(t, op, targets, n_qubits);
  m = t.adjoint();
}

void apply_channel(Matrix& m, std::span<const Matrix> ops, std::span<const int> targets, int n_qubits) {
  if (ops.size() == 1) {
    conjugate(m, ops[0], targets, n_qubits);
    return;
  }
  Matrix sum = Matrix::Zero(m.rows(), m.cols());
  for (const auto& op : ops) {
    Matrix term = m;
    conjugate(term, op, targets, n_qubits);
    sum += term;
  }
  m = std::move(sum);
}

}  // namespace detail

UnitaryGate::UnitaryGate(Matrix matrix_in, std::vector<int> targets_in)
    : matrix(std::move(matrix_in)), targets(std::move(targets_in)) {
  const auto expected = Eigen::Index{1} << targets.size();
  if (matrix.rows() != expected || matrix.cols() != expected) {
    throw InvalidInput("gate dimension does not match its target count");
  }
  const Matrix check = matrix * matrix.adjoint() - Matrix::Identity(expected, expected);
  if (check.cwiseAbs().maxCoeff() > 1e-12) throw InvalidInput("gate matrix is not unitary");
}

KrausChannel::KrausChannel(std::vector<Matrix> operators, std::vector<int> targets, double tolerance)
    : operators_(std::move(operators)), targets_(std::move(targets)) {
  if (operators_.empty()) throw InvalidInput("channel needs at least one Kraus operator");
  const auto expected = Eigen::Index{1} << targets_.size();
  Matrix sum = Matrix::Zero(expected, expected);
  for (const auto& m : operators_) {
    if (m.rows() != expected || m.cols() != expected) {
      throw InvalidInput("Kraus operator dimension does not match its target count");
    }
    sum += m.adjoint() * m;
  }
  if ((sum - Matrix::Identity(expected, expected)).cwiseAbs().maxCoeff() > tolerance) {
    throw InvalidInput("Kraus operators violate completeness");
  }
}

KrausChannel KrausChannel::retarget(std::vector<int> targets) const {
  if (targets.size() != targets_.size()) throw InvalidInput("retarget changes operator arity");
  KrausChannel copy = *this;
  copy.targets_ = std::move(targets);
  return copy;
}

Eigen::Matrix2cd pauli_matrix(char label) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (label) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, -1i, 1i, 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw InvalidInput("unknown Pauli label '" + std::string(1, label) + "'");
  }
  return m;
}

UnitaryGate pauli(char label, int target) { return UnitaryGate(pauli_matrix(label), {target}); }

UnitaryGate hadamard(int target) {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return UnitaryGate(std::move(h), {target});
}

UnitaryGate cnot(int control, int target) {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return UnitaryGate(std::move(m), {control, target});
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& gate) {
  detail::check_targets(gate.targets, rho.n_qubits());
  Matrix m = rho.matrix();
  detail::conjugate(m, gate.matrix, gate.targets, rho.n_qubits());
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel) {
  detail::check_targets(channel.targets(), rho.n_qubits());
  Matrix m = rho.matrix();
  detail::apply_channel(m, channel.operators(), channel.targets(), rho.n_qubits());
  return DensityMatrix::from_matrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Readout

std::vector<double> computational_distribution(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    if (v < -kNegativeClamp) throw InvalidInput("negative diagonal entry in density matrix");
    p[i] = std::clamp(v, 0.0, 1.0);
  }
  // Divide out trace roundoff. Summing in sorted order makes the result
  // independent of how the outcomes are permuted.
  std::vector<double> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  const double trace = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (trace > 0.0) {
    for (auto& v : p) v /= trace;
  }
  return p;
}

CountsTable sample_counts(std::span<const double> probs, std::uint64_t shots, Rng& rng) {
  int n = 0;
  while ((std::size_t{1} << n) < probs.size()) ++n;
  if ((std::size_t{1} << n) != probs.size() || n < 1) {
    throw InvalidInput("probability vector length must be 2^n");
  }
  std::vector<double> p(probs.begin(), probs.end());
  for (auto& v : p) {
    if (v < -kNegativeClamp) throw InvalidInput("negative probability");
    v = std::max(v, 0.0);
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("probabilities do not sum to 1");
  for (auto& v : p) v /= total;

  // Sequential conditional binomials.
  CountsTable table(n);
  std::uint64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i < p.size() && remaining > 0; ++i) {
    if (p[i] <= 0.0) {
      mass -= p[i];
      continue;
    }
    std::uint64_t draw = 0;
    if (i + 1 == p.size() || p[i] >= mass) {
      draw = remaining;
    } else {
      std::binomial_distribution<std::uint64_t> binom(remaining, std::clamp(p[i] / mass, 0.0, 1.0));
      draw = binom(rng);
    }
    table.add(i, draw);
    remaining -= draw;
    mass -= p[i];
  }
  return table;
}

double qubit_expectation(std::span<const double> probs, int qubit) {
  int n = 0;
  while ((std::size_t{1} << n) < probs.size()) ++n;
  if (qubit < 0 || qubit >= n) throw InvalidInput("qubit index out of range");
  double e = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    e += qubit_bit(i, qubit, n) ? -probs[i] : probs[i];
  }
  return e;
}

double qubit_expectation(const CountsTable& counts, int qubit) {
  if (qubit < 0 || qubit >= counts.n_qubits()) throw InvalidInput("qubit index out of range");
  if (counts.total_shots() == 0) throw UndefinedMean("expectation of an empty counts table");
  std::int64_t signed_sum = 0;
  const auto dense = counts.dense();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const auto c = static_cast<std::int64_t>(dense[i]);
    signed_sum += qubit_bit(i, qubit, counts.n_qubits()) ? -c : c;
  }
  return static_cast<double>(signed_sum) / static_cast<double>(counts.total_shots());
}

std::vector<double> marginal_distribution(std::span<const double> probs, std::span<const int> qubits) {
  int n = 0;
  while ((std::size_t{1} << n) < probs.size()) ++n;
  detail::check_targets(qubits, n);
  const std::size_t k = qubits.size();
  std::vector<double> out(std::size_t{1} << k, 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    std::size_t local = 0;
    for (std::size_t j = 0; j < k; ++j) local = (local << 1) | static_cast<std::size_t>(qubit_bit(i, qubits[j], n));
    out[local] += probs[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// CountsTable

CountsTable::CountsTable(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  counts_.assign(std::size_t{1} << n_qubits, 0);
}

CountsTable::CountsTable(int n_qubits, const std::map<std::string, std::uint64_t>& entries)
    : CountsTable(n_qubits) {
  for (const auto& [bits, n] : entries) add(bits, n);
}

std::uint64_t CountsTable::count(std::string_view bits) const {
  if (bits.size() != static_cast<std::size_t>(n_qubits_)) throw InvalidInput("bitstring length mismatch");
  return counts_[bitstring_index(bits)];
}

void CountsTable::add(std::uint64_t index, std::uint64_t n) {
  if (index >= counts_.size()) throw InvalidInput("outcome index out of range");
  counts_[index] += n;
  total_ += n;
}

void CountsTable::add(std::string_view bits, std::uint64_t n) {
  if (bits.size() != static_cast<std::size_t>(n_qubits_)) {
    throw InvalidInput("bitstring '" + std::string(bits) + "' has wrong length");
  }
  add(bitstring_index(bits), n);
}

std::map<std::string, std::uint64_t> CountsTable::entries() const {
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] > 0) out.emplace(to_bitstring(i, n_qubits_), counts_[i]);
  }
  return out;
}

CountsTable CountsTable::marginal(std::span<const int> qubits) const {
  detail::check_targets(qubits, n_qubits_);
  CountsTable out(static_cast<int>(qubits.size()));
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    std::uint64_t local = 0;
    for (int q : qubits) local = (local << 1) | static_cast<std::uint64_t>(qubit_bit(i, q, n_qubits_));
    out.add(local, counts_[i]);
  }
  return out;
}

}  // namespace pecsim
