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

#ifndef PECSIM_NOISE_HPP
#define PECSIM_NOISE_HPP

#include "pecsim/qsim.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace pecsim {

inline constexpr double kDefaultXMax = 1.0 / 3.0;

/// Noise at one time period: per-qubit SPAM fidelity and the CNOT depolarizing pair.
struct NoiseParams {
  std::vector<double> spam_fidelity;
  double depol_control = 0.0;
  double depol_target = 0.0;

  /// Every fidelity strictly above 1/2 and both depolarizing values in [0, x_max].
  void validate(double x_max = kDefaultXMax) const;

  [[nodiscard]] int n_qubits() const noexcept { return static_cast<int>(spam_fidelity.size()); }

  static NoiseParams noiseless(int n_qubits) { return {std::vector<double>(static_cast<std::size_t>(n_qubits), 1.0), 0.0, 0.0}; }

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

struct DriftEntry {
  double initial_mean = 0.0;
  double per_period_delta = 0.0;
  double variance = 0.0;
};

/// Linear drift of every noise parameter's mean over `n_periods` periods.
struct DriftSpec {
  std::vector<DriftEntry> spam;
  DriftEntry depol_control;
  DriftEntry depol_target;
  int n_periods = 10;
  double x_max = kDefaultXMax;

  /// Checks that every implied mean stays legal and Beta-representable for t in [0, n_periods].
  void validate() const;
};

/// Selects one drifting parameter of a DriftSpec.
struct DriftParameter {
  enum class Kind { kSpam, kDepolControl, kDepolTarget };
  Kind kind;
  int qubit = 0;

  static DriftParameter spam(int q) { return {Kind::kSpam, q}; }
  static DriftParameter depol_control() { return {Kind::kDepolControl, 0}; }
  static DriftParameter depol_target() { return {Kind::kDepolTarget, 0}; }
};

struct NoiseTrajectory {
  std::uint64_t seed = 0;
  /// periods[t - 1] holds the noise realized at period t.
  std::vector<NoiseParams> periods;
};

/// Symmetric readout error: Kraus operators sqrt(f) I and sqrt(1-f) X, so outcome i
/// occurs with probability Tr[M_i^dag M_i rho] for the measurement operators
/// M0 = sqrt(f)|0><0| + sqrt(1-f)|1><1| and M1 = sqrt(1-f)|0><0| + sqrt(f)|1><1|.
KrausChannel spam_channel(double fidelity, int target = 0);

/// Weights of the two-qubit Pauli mixture, indexed 4*idx(P_C) + idx(P_T) over (I, X, Y, Z).
std::array<double, 16> cnot_depol_weights(double x_control, double x_target);

/// The depolarizing mixture as a Kraus channel on (control, target).
KrausChannel cnot_depol_channel(double x_control, double x_target, int control = 0, int target = 1);

double drift_mean(const DriftSpec& spec, DriftParameter parameter, int t);

/// Noise for period t drawn from Beta laws with the drifted means. Deterministic in (seed, t).
NoiseParams sample_period_params(const DriftSpec& spec, int t, Rng& rng);

/// Periods 1..n_periods, each drawn from its own stream derived from (seed, t).
NoiseTrajectory generate_trajectory(const DriftSpec& spec, std::uint64_t seed);

/// Means at period t with no sampling.
NoiseParams mean_params(const DriftSpec& spec, int t);

}  // namespace pecsim

#endif
