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

#ifndef PECSIM_PEC_HPP
#define PECSIM_PEC_HPP

/**
 * \file
 * \brief Quasi-probability decompositions for SPAM and CNOT noise and the
 * sign-adjusted estimators built on them.
 */

#include "pecsim/bv_circuit.hpp"
#include "pecsim/noise.hpp"
#include "pecsim/qsim.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pecsim {

struct SpamPec {
  double eta0 = 1.0;
  double eta1 = 0.0;
  double gamma = 1.0;
};

/// eta[4 idx(P_C) + idx(P_T)] over (I, X, Y, Z).
struct CnotPec {
  std::array<double, 16> eta{};
  double gamma = 1.0;
};

class QuasiProbabilityDistribution {
 public:
  QuasiProbabilityDistribution() = default;
  /// Throws InvalidInput if sum(eta) is not 1 within 1e-9.
  explicit QuasiProbabilityDistribution(std::vector<double> eta);

  [[nodiscard]] std::size_t size() const noexcept { return eta_.size(); }
  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] const std::vector<double>& eta() const noexcept { return eta_; }
  /// Q_k = |eta_k| / gamma.
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] int sign(std::size_t k) const;

 private:
  std::vector<double> eta_;
  std::vector<double> weights_;
  double gamma_ = 0.0;
};

struct PecEstimate {
  enum class Mode { kFullSum, kMonteCarlo };

  Mode mode = Mode::kFullSum;
  std::vector<double> values;
  /// Monte-Carlo only.
  std::uint64_t n_samples = 0;
  std::vector<double> std_error;
};

/// eta0 = f/(2f-1), eta1 = -(1-f)/(2f-1). Throws SingularParameter for f <= 0.5 + 1e-6.
SpamPec spam_coeffs(double fidelity);

/// Exact inverse of the depolarized CNOT, from a least-squares solve in the
/// Pauli-transfer representation. Throws SingularParameter when the system's
/// reciprocal condition number falls below 1e-12.
CnotPec cnot_coeffs_numeric(double x_control, double x_target);

/// Closed-form coefficients, read as c0 = 3 / ([x_T(1-x_C)]^2 + [x_C(1-x_T)]^2 - 3 c1^2)
/// with the mixed-Pauli value on all nine mixed indices. Cross-check only.
CnotPec cnot_coeffs_closed_form(double x_control, double x_target);

/// 16 x 16 Pauli-transfer matrix of a two-qubit channel, T_ij = Tr[P_i E(P_j)] / 4.
Eigen::Matrix<double, 16, 16> pauli_transfer_matrix(std::span<const Matrix> kraus_ops);

/// Cartesian product of the per-CNOT and per-qubit factors in the basis-index layout.
QuasiProbabilityDistribution composite_qpd(const NoiseParams& params, const CircuitSpec& circuit,
                                           double x_max = kDefaultXMax);

/// Per-qubit <Z_q> of every basis circuit.
using ExpectationTable = std::vector<std::vector<double>>;

ExpectationTable expectations_from_distributions(const std::vector<std::vector<double>>& distributions);
ExpectationTable expectations_from_counts(const std::vector<CountsTable>& counts);

/// sum_k eta_k <O_q>_k, accumulated in ascending k.
PecEstimate full_sum_estimate(const ExpectationTable& expectations, const QuasiProbabilityDistribution& qpd);

using CircuitExecutor = std::function<std::vector<double>(std::uint64_t k)>;

/// Mean of gamma * sgn(eta_K) * executor(K) over K ~ Q, with its standard error.
PecEstimate monte_carlo_estimate(const QuasiProbabilityDistribution& qpd, const CircuitExecutor& executor,
                                 std::uint64_t n_samples, Rng& rng);

}  // namespace pecsim

#endif
