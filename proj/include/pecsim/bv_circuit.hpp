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

#ifndef PECSIM_BV_CIRCUIT_HPP
#define PECSIM_BV_CIRCUIT_HPP

/**
 * \file
 * \brief Layered Bernstein-Vazirani circuits and their Pauli-decorated variants.
 *
 * A secret of length n-1 uses n qubits; the ancilla is qubit n-1. The character at
 * distance i from the right end of the secret is bit r_i and controls a CNOT from
 * qubit i onto the ancilla when set. "1000" therefore puts a CNOT on (3, 4) and the
 * noiseless outcome is "00010".
 *
 * Basis-circuit index layout for m CNOTs on n qubits:
 *
 *     k = spam_mask * 16^m + sum_j code_j * 16^(m-1-j),   code = 4 idx(P_C) + idx(P_T)
 *
 * with idx over (I, X, Y, Z) and bit q of spam_mask set when qubit q receives an
 * X just before measurement. k = 0 is the undecorated circuit.
 */

#include "pecsim/noise.hpp"
#include "pecsim/qsim.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pecsim {

class SecretString {
 public:
  explicit SecretString(std::string bits);

  [[nodiscard]] const std::string& str() const noexcept { return bits_; }
  [[nodiscard]] int length() const noexcept { return static_cast<int>(bits_.size()); }
  /// r_i, counted from the right end.
  [[nodiscard]] int bit(int i) const;

  friend bool operator==(const SecretString&, const SecretString&) = default;

 private:
  std::string bits_;
};

enum class GateKind { kH, kX, kY, kZ, kCnot };

struct Gate {
  GateKind kind;
  int qubit;
  /// CNOT target; unused otherwise.
  int target = -1;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct CircuitSpec {
  SecretString secret{"0"};
  int n_qubits = 0;
  std::vector<Gate> layer1;
  std::vector<Gate> layer2;
  std::vector<Gate> layer3;
  /// (control, ancilla) per CNOT, in layer order.
  std::vector<std::pair<int, int>> cnot_pairs;

  [[nodiscard]] int n_cnots() const noexcept { return static_cast<int>(cnot_pairs.size()); }
  [[nodiscard]] int ancilla() const noexcept { return n_qubits - 1; }
};

/// Pauli letters after each CNOT and the pre-measurement X mask.
struct Decoration {
  std::vector<std::array<char, 2>> cnot_paulis;
  std::uint32_t spam_mask = 0;

  friend bool operator==(const Decoration&, const Decoration&) = default;
};

struct DecoratedCircuit {
  CircuitSpec circuit;
  Decoration decoration;
};

CircuitSpec build_bv(const SecretString& secret);

/// +1/-1 per qubit including the ancilla.
std::vector<int> ideal_expectations(const SecretString& secret);

/// Noiseless outcome index: secret bits on the data qubits, ancilla 0.
std::uint64_t ideal_outcome(const CircuitSpec& circuit);

/// 16^m * 2^n.
std::uint64_t basis_circuit_count(const CircuitSpec& circuit);

int pauli_index(char label);
char pauli_label(int index);

Decoration decode_basis_index(const CircuitSpec& circuit, std::uint64_t k);
std::uint64_t encode_basis_index(const CircuitSpec& circuit, const Decoration& decoration);

DecoratedCircuit decorate(const CircuitSpec& circuit, std::uint64_t k);

/// Layer 1, then each CNOT followed by its depolarizing channel and Pauli decoration,
/// layer 3, per-qubit SPAM, and finally the decoration X gates.
std::vector<double> exact_noisy_distribution(const DecoratedCircuit& circuit, const NoiseParams& params);

CountsTable run_circuit(const DecoratedCircuit& circuit, const NoiseParams& params, std::uint64_t shots, Rng& rng);

/// Distributions of all basis circuits in ascending k. OpenMP-parallel over the
/// CNOT decorations; SPAM decorations are applied as exact outcome bit flips.
std::vector<std::vector<double>> basis_distributions(const CircuitSpec& circuit, const NoiseParams& params);

/// One exact_noisy_distribution call per k; the reference for basis_distributions.
std::vector<std::vector<double>> basis_distributions_serial(const CircuitSpec& circuit, const NoiseParams& params);

/// Counts for every basis circuit. Circuit k draws from stream (seed, k) so the result
/// does not depend on evaluation order.
std::vector<CountsTable> sample_basis_counts(const std::vector<std::vector<double>>& distributions,
                                             std::uint64_t shots, std::uint64_t seed);

}  // namespace pecsim

#endif
