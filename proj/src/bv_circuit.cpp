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

#include "pecsim/bv_circuit.hpp"

#include "pecsim/errors.hpp"

#include <cstddef>
#include <string>

namespace pecsim {

namespace {

constexpr char kPauliLabels[4] = {'I', 'X', 'Y', 'Z'};

const Matrix& gate_matrix(GateKind kind) {
  static const Matrix h = hadamard(0).matrix;
  static const Matrix x = Matrix(pauli_matrix('X'));
  static const Matrix y = Matrix(pauli_matrix('Y'));
  static const Matrix z = Matrix(pauli_matrix('Z'));
  static const Matrix cx = cnot(0, 1).matrix;
  switch (kind) {
    case GateKind::kH:
      return h;
    case GateKind::kX:
      return x;
    case GateKind::kY:
      return y;
    case GateKind::kZ:
      return z;
    case GateKind::kCnot:
      return cx;
  }
  throw InvalidInput("unknown gate kind");
}

GateKind pauli_gate(char label) {
  switch (label) {
    case 'X':
      return GateKind::kX;
    case 'Y':
      return GateKind::kY;
    case 'Z':
      return GateKind::kZ;
    default:
      throw InvalidInput("not a non-identity Pauli: '" + std::string(1, label) + "'");
  }
}

void apply_gate(Matrix& rho, const Gate& g, int n) {
  if (g.kind == GateKind::kCnot) {
    const int targets[2] = {g.qubit, g.target};
    detail::conjugate(rho, gate_matrix(g.kind), targets, n);
  } else {
    const int targets[1] = {g.qubit};
    detail::conjugate(rho, gate_matrix(g.kind), targets, n);
  }
}

std::uint64_t pow16(int m) { return std::uint64_t{1} << (4 * m); }

void check_params(const CircuitSpec& circuit, const NoiseParams& params) {
  if (params.n_qubits() != circuit.n_qubits) {
    throw InvalidInput("noise parameters cover " + std::to_string(params.n_qubits()) + " qubits, circuit has " +
                       std::to_string(circuit.n_qubits));
  }
}

/// Outcome-index XOR mask realizing the pre-measurement X gates of `spam_mask`.
std::uint64_t flip_mask(std::uint32_t spam_mask, int n) {
  std::uint64_t flip = 0;
  for (int q = 0; q < n; ++q) {
    if ((spam_mask >> q) & 1U) flip |= std::uint64_t{1} << (n - 1 - q);
  }
  return flip;
}

}  // namespace

SecretString::SecretString(std::string bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw InvalidInput("secret string must be nonempty");
  if (bits_.size() + 1 > static_cast<std::size_t>(kMaxQubits)) throw InvalidInput("secret string too long");
  for (char c : bits_) {
    if (c != '0' && c != '1') throw InvalidInput("secret string must contain only 0 and 1");
  }
}

int SecretString::bit(int i) const {
  if (i < 0 || i >= length()) throw InvalidInput("secret bit index out of range");
  return bits_[bits_.size() - 1 - static_cast<std::size_t>(i)] == '1' ? 1 : 0;
}

CircuitSpec build_bv(const SecretString& secret) {
  CircuitSpec c;
  c.secret = secret;
  c.n_qubits = secret.length() + 1;
  const int anc = c.ancilla();
  for (int q = 0; q < c.n_qubits; ++q) c.layer1.push_back({GateKind::kH, q});
  c.layer1.push_back({GateKind::kZ, anc});
  for (int i = 0; i < secret.length(); ++i) {
    if (secret.bit(i)) {
      c.layer2.push_back({GateKind::kCnot, i, anc});
      c.cnot_pairs.emplace_back(i, anc);
    }
  }
  c.layer3.push_back({GateKind::kZ, anc});
  for (int q = 0; q < c.n_qubits; ++q) c.layer3.push_back({GateKind::kH, q});
  return c;
}

std::vector<int> ideal_expectations(const SecretString& secret) {
  std::vector<int> out;
  for (int i = 0; i < secret.length(); ++i) out.push_back(secret.bit(i) ? -1 : 1);
  out.push_back(1);
  return out;
}

std::uint64_t ideal_outcome(const CircuitSpec& circuit) {
  std::uint64_t idx = 0;
  for (int q = 0; q < circuit.n_qubits - 1; ++q) {
    if (circuit.secret.bit(q)) idx |= std::uint64_t{1} << (circuit.n_qubits - 1 - q);
  }
  return idx;
}

std::uint64_t basis_circuit_count(const CircuitSpec& circuit) {
  return pow16(circuit.n_cnots()) << circuit.n_qubits;
}

int pauli_index(char label) {
  for (int i = 0; i < 4; ++i) {
    if (kPauliLabels[i] == label) return i;
  }
  throw InvalidInput("unknown Pauli label '" + std::string(1, label) + "'");
}

char pauli_label(int index) {
  if (index < 0 || index > 3) throw InvalidInput("Pauli index out of range");
  return kPauliLabels[index];
}

Decoration decode_basis_index(const CircuitSpec& circuit, std::uint64_t k) {
  if (k >= basis_circuit_count(circuit)) throw InvalidInput("basis-circuit index out of range");
  const int m = circuit.n_cnots();
  Decoration d;
  d.spam_mask = static_cast<std::uint32_t>(k / pow16(m));
  std::uint64_t rest = k % pow16(m);
  d.cnot_paulis.resize(static_cast<std::size_t>(m));
  for (int j = m - 1; j >= 0; --j) {
    const int code = static_cast<int>(rest % 16);
    rest /= 16;
    d.cnot_paulis[static_cast<std::size_t>(j)] = {kPauliLabels[code / 4], kPauliLabels[code % 4]};
  }
  return d;
}

std::uint64_t encode_basis_index(const CircuitSpec& circuit, const Decoration& d) {
  const int m = circuit.n_cnots();
  if (d.cnot_paulis.size() != static_cast<std::size_t>(m)) throw InvalidInput("one Pauli pair per CNOT required");
  if (d.spam_mask >> circuit.n_qubits) throw InvalidInput("SPAM mask has bits beyond the register");
  std::uint64_t k = 0;
  for (const auto& [pc, pt] : d.cnot_paulis) {
    k = k * 16 + static_cast<std::uint64_t>(4 * pauli_index(pc) + pauli_index(pt));
  }
  return static_cast<std::uint64_t>(d.spam_mask) * pow16(m) + k;
}

DecoratedCircuit decorate(const CircuitSpec& circuit, std::uint64_t k) {
  return {circuit, decode_basis_index(circuit, k)};
}

std::vector<double> exact_noisy_distribution(const DecoratedCircuit& dc, const NoiseParams& params) {
  const auto& c = dc.circuit;
  const auto& d = dc.decoration;
  check_params(c, params);
  if (d.cnot_paulis.size() != static_cast<std::size_t>(c.n_cnots())) {
    throw InvalidInput("decoration does not match the circuit's CNOT count");
  }
  const int n = c.n_qubits;
  Matrix rho = DensityMatrix::basis_state(n, 0).matrix();

  for (const auto& g : c.layer1) apply_gate(rho, g, n);

  const KrausChannel depol = cnot_depol_channel(params.depol_control, params.depol_target);
  for (std::size_t j = 0; j < c.layer2.size(); ++j) {
    const Gate& g = c.layer2[j];
    apply_gate(rho, g, n);
    const int targets[2] = {g.qubit, g.target};
    detail::apply_channel(rho, depol.operators(), targets, n);
    const auto [pc, pt] = d.cnot_paulis[j];
    if (pc != 'I') apply_gate(rho, {pauli_gate(pc), g.qubit}, n);
    if (pt != 'I') apply_gate(rho, {pauli_gate(pt), g.target}, n);
  }

  for (const auto& g : c.layer3) apply_gate(rho, g, n);

  for (int q = 0; q < n; ++q) {
    const double f = params.spam_fidelity[static_cast<std::size_t>(q)];
    if (f == 1.0) continue;
    const KrausChannel spam = spam_channel(f);
    const int targets[1] = {q};
    detail::apply_channel(rho, spam.operators(), targets, n);
  }

  for (int q = 0; q < n; ++q) {
    if ((d.spam_mask >> q) & 1U) apply_gate(rho, {GateKind::kX, q}, n);
  }

  return computational_distribution(DensityMatrix::from_matrix(std::move(rho)));
}

CountsTable run_circuit(const DecoratedCircuit& circuit, const NoiseParams& params, std::uint64_t shots, Rng& rng) {
  const auto p = exact_noisy_distribution(circuit, params);
  return sample_counts(p, shots, rng);
}

std::vector<std::vector<double>> basis_distributions(const CircuitSpec& circuit, const NoiseParams& params) {
  check_params(circuit, params);
  const int n = circuit.n_qubits;
  const auto n_codes = static_cast<std::int64_t>(pow16(circuit.n_cnots()));
  const std::uint64_t n_masks = std::uint64_t{1} << n;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::vector<double>> out(basis_circuit_count(circuit));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t code = 0; code < n_codes; ++code) {
    const auto base = exact_noisy_distribution(decorate(circuit, static_cast<std::uint64_t>(code)), params);
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
      const std::uint64_t flip = flip_mask(static_cast<std::uint32_t>(mask), n);
      std::vector<double> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i ^ flip] = base[i];
      out[mask * static_cast<std::uint64_t>(n_codes) + static_cast<std::uint64_t>(code)] = std::move(p);
    }
  }
  return out;
}

std::vector<std::vector<double>> basis_distributions_serial(const CircuitSpec& circuit, const NoiseParams& params) {
  std::vector<std::vector<double>> out;
  const std::uint64_t total = basis_circuit_count(circuit);
  out.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) out.push_back(exact_noisy_distribution(decorate(circuit, k), params));
  return out;
}

std::vector<CountsTable> sample_basis_counts(const std::vector<std::vector<double>>& distributions,
                                             std::uint64_t shots, std::uint64_t seed) {
  std::vector<CountsTable> out;
  out.reserve(distributions.size());
  for (std::size_t k = 0; k < distributions.size(); ++k) {
    Rng rng = make_rng(seed, k);
    out.push_back(sample_counts(distributions[k], shots, rng));
  }
  return out;
}

}  // namespace pecsim
