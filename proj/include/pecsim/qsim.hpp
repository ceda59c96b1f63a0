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

#ifndef PECSIM_QSIM_HPP
#define PECSIM_QSIM_HPP

/**
 * \file
 * \brief Dense density-matrix simulation for registers of at most eight qubits.
 *
 * Bit ordering is big-endian throughout: qubit 0 is the most significant bit of
 * a basis index and the leftmost character of a bitstring. Multi-qubit operators
 * use the same convention over their ordered target list.
 */

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pecsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Deterministic random stream. All sampling takes one of these explicitly.
using Rng = std::mt19937_64;

/// Derive an independent stream from a master seed and a stream label.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

inline constexpr int kMaxQubits = 8;

std::string to_bitstring(std::uint64_t index, int n_qubits);
std::uint64_t bitstring_index(std::string_view bits);

/// Bit of `index` belonging to `qubit` in an `n_qubits` register.
inline int qubit_bit(std::uint64_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U);
}

class DensityMatrix {
 public:
  /// |index><index| on `n_qubits` qubits.
  static DensityMatrix basis_state(int n_qubits, std::uint64_t index = 0);
  static DensityMatrix maximally_mixed(int n_qubits);

  /// Checks dimension, trace and Hermiticity; positivity is left to validate().
  static DensityMatrix from_matrix(Matrix data);

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return data_; }

  /// Full invariant check including the eigenvalue-based PSD test. Throws InvalidInput.
  void validate() const;

  [[nodiscard]] double min_eigenvalue() const;

 private:
  DensityMatrix(int n_qubits, Matrix data) : n_qubits_(n_qubits), data_(std::move(data)) {}

  int n_qubits_;
  Matrix data_;
};

struct UnitaryGate {
  /// Validates U U^dagger = I within 1e-12 and that the dimension matches the targets.
  UnitaryGate(Matrix matrix, std::vector<int> targets);

  Matrix matrix;
  std::vector<int> targets;
};

class KrausChannel {
 public:
  /// Validates sum M^dagger M = I within `tolerance`.
  KrausChannel(std::vector<Matrix> operators, std::vector<int> targets, double tolerance = 1e-12);

  [[nodiscard]] const std::vector<Matrix>& operators() const noexcept { return operators_; }
  [[nodiscard]] const std::vector<int>& targets() const noexcept { return targets_; }

  /// Same operators acting on different qubits.
  [[nodiscard]] KrausChannel retarget(std::vector<int> targets) const;

 private:
  std::vector<Matrix> operators_;
  std::vector<int> targets_;
};

/// Outcome counts indexed by bitstring (qubit 0 leftmost).
class CountsTable {
 public:
  explicit CountsTable(int n_qubits);
  CountsTable(int n_qubits, const std::map<std::string, std::uint64_t>& entries);

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] std::uint64_t total_shots() const noexcept { return total_; }
  [[nodiscard]] std::uint64_t count(std::uint64_t index) const { return counts_.at(index); }
  [[nodiscard]] std::uint64_t count(std::string_view bits) const;
  [[nodiscard]] std::span<const std::uint64_t> dense() const noexcept { return counts_; }

  /// Nonzero entries only, ordered by bitstring.
  [[nodiscard]] std::map<std::string, std::uint64_t> entries() const;

  void add(std::uint64_t index, std::uint64_t n);
  void add(std::string_view bits, std::uint64_t n);

  /// Counts over a subset of qubits, in the order given.
  [[nodiscard]] CountsTable marginal(std::span<const int> qubits) const;

  friend bool operator==(const CountsTable&, const CountsTable&) = default;

 private:
  int n_qubits_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Pauli matrix for one of 'I', 'X', 'Y', 'Z'.
Eigen::Matrix2cd pauli_matrix(char label);
UnitaryGate pauli(char label, int target);
UnitaryGate hadamard(int target);
UnitaryGate cnot(int control, int target);

DensityMatrix apply_unitary(const DensityMatrix& rho, const UnitaryGate& gate);
DensityMatrix apply_kraus(const DensityMatrix& rho, const KrausChannel& channel);

/// Diagonal of rho, renormalized by its trace. Entries above -1e-12 are clamped
/// into [0, 1]; anything more negative throws.
std::vector<double> computational_distribution(const DensityMatrix& rho);

/// Multinomial draw of `shots` outcomes from `probs`.
CountsTable sample_counts(std::span<const double> probs, std::uint64_t shots, Rng& rng);

/// <Z_q> from a probability vector over 2^n outcomes.
double qubit_expectation(std::span<const double> probs, int qubit);
/// <Z_q> from empirical frequencies. Throws UndefinedMean on an empty table.
double qubit_expectation(const CountsTable& counts, int qubit);

/// Marginal distribution over a subset of qubits, in the order given.
std::vector<double> marginal_distribution(std::span<const double> probs, std::span<const int> qubits);

namespace detail {

/// In-place op * m where `op` acts on `targets` of an `n_qubits` register.
void apply_left(Matrix& m, const Matrix& op, std::span<const int> targets, int n_qubits);

/// In-place op * m * op^dagger.
void conjugate(Matrix& m, const Matrix& op, std::span<const int> targets, int n_qubits);

/// In-place sum_j M_j m M_j^dagger.
void apply_channel(Matrix& m, std::span<const Matrix> ops, std::span<const int> targets, int n_qubits);

void check_targets(std::span<const int> targets, int n_qubits);

}  // namespace detail

}  // namespace pecsim

#endif
