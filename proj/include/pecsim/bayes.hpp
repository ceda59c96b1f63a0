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

#ifndef PECSIM_BAYES_HPP
#define PECSIM_BAYES_HPP

/**
 * \file
 * \brief Conjugate tracking of drifting noise parameters.
 *
 * Qubits outside every CNOT see only their own readout flip, so a Beta posterior
 * on the fidelity suffices. The CNOT-coupled block is tracked as a Dirichlet over
 * its joint outcomes; the posterior means are mapped back to noise parameters by
 * inverting a multilinear forward map on a grid.
 */

#include "pecsim/bv_circuit.hpp"
#include "pecsim/noise.hpp"
#include "pecsim/pec.hpp"
#include "pecsim/qsim.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace pecsim {

struct BetaPosterior {
  double alpha = 1.0;
  double beta = 1.0;

  [[nodiscard]] double mean() const { return alpha / (alpha + beta); }
  [[nodiscard]] double variance() const {
    const double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1.0));
  }

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;
};

struct DirichletPosterior {
  std::vector<double> a;

  friend bool operator==(const DirichletPosterior&, const DirichletPosterior&) = default;
};

struct MarginalMoments {
  double mean;
  double variance;
  BetaPosterior beta;
};

/// Beta law with the given mean and variance. Throws UnrepresentableMoments unless 0 < v < mu(1 - mu).
BetaPosterior beta_from_mean_var(double mean, double variance);

/// Conjugate update with `successes` of `trials` observations matching the ideal bit.
BetaPosterior beta_update(const BetaPosterior& prior, std::uint64_t successes, std::uint64_t trials);

DirichletPosterior dirichlet_update(const DirichletPosterior& prior, std::span<const std::uint64_t> counts);

MarginalMoments dirichlet_marginal_moments(const DirichletPosterior& posterior, std::size_t i);

/// Outcome law of the correlated block as a multilinear polynomial in its parameters.
///
/// Parameters are ordered (f of each correlated qubit in register order, x_C, x_T).
/// corner_values[b][i] is the probability of outcome i with parameter j set to bit j
/// of b (most significant bit first); evaluation is multilinear interpolation over
/// the unit box, which is exact for a multilinear law.
class ForwardMap {
 public:
  ForwardMap(int n_parameters, int n_outcomes, std::vector<std::vector<double>> corner_values);

  [[nodiscard]] int n_parameters() const noexcept { return n_parameters_; }
  [[nodiscard]] int n_outcomes() const noexcept { return n_outcomes_; }
  [[nodiscard]] const std::vector<std::vector<double>>& corner_values() const noexcept { return corners_; }

  [[nodiscard]] std::vector<double> evaluate(std::span<const double> theta) const;

  /// Monomial coefficients c[S][i] so that Pr_i = sum_S c[S][i] prod_{j in S} theta_j.
  [[nodiscard]] std::vector<std::vector<double>> monomial_coefficients() const;

 private:
  int n_parameters_;
  int n_outcomes_;
  std::vector<std::vector<double>> corners_;
};

using BlockSimulator = std::function<std::vector<double>(std::span<const double>)>;

/// Samples `simulator` at the unit-box corners and checks the multilinear fit at
/// `n_probes` random interior points. Throws ModelMismatch if any residual exceeds 1e-8.
ForwardMap fit_forward_map(int n_parameters, const BlockSimulator& simulator, int n_probes = 100,
                           std::uint64_t probe_seed = 0x5eed);

/// The correlated block's simulator for a BV circuit: every uncorrelated qubit noiseless.
BlockSimulator correlated_block_simulator(const CircuitSpec& circuit);

struct AxisSpec {
  double min = 0.0;
  double max = 1.0;
  double step = 0.01;

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] double value(std::size_t i) const;
};

struct GridSpec {
  AxisSpec fidelity{0.5, 1.0, 0.01};
  AxisSpec depol{0.0, 0.25, 0.005};
  int refinement_levels = 0;

  void validate() const;
};

struct InversionResult {
  std::vector<double> theta;
  double mse = 0.0;
};

/// Grid point minimizing sum_i (Pr_i(theta) - target_i)^2, ties to the lexicographically
/// smallest theta. The first n_parameters - 2 axes use `grid.fidelity`, the last two `grid.depol`.
InversionResult invert_forward_map(std::span<const double> targets, const ForwardMap& map, const GridSpec& grid);

/// Per-axis grids for one inversion pass.
using Axes = std::vector<std::vector<double>>;

/// Exhaustive argmin over the Cartesian product of `axes`. OpenMP-parallel over the
/// first axis with an ordered reduction, so the result equals grid_argmin_serial bit for bit.
InversionResult grid_argmin(std::span<const double> targets, const ForwardMap& map, const Axes& axes);

/// Straight loop over flat grid indices; the reference for grid_argmin.
InversionResult grid_argmin_serial(std::span<const double> targets, const ForwardMap& map, const Axes& axes);

struct PriorConfig {
  std::vector<double> spam_mean;
  std::vector<double> spam_variance;
  double depol_control_mean = 0.0;
  double depol_target_mean = 0.0;
  /// Total weight of the Dirichlet prior.
  double dirichlet_pseudo_count = 10.0;
};

struct EstimatorState {
  CircuitSpec circuit;
  std::vector<int> uncorrelated_qubits;
  std::vector<int> correlated_qubits;
  /// One per uncorrelated qubit, same order.
  std::vector<BetaPosterior> beta;
  DirichletPosterior dirichlet;
  std::vector<int> ideal_bits;
  NoiseParams estimate;
  GridSpec grid;
  /// Shared across updates; fitted once per circuit.
  std::shared_ptr<const ForwardMap> forward_map;
  double last_mse = 0.0;
};

/// Priors at period 0: Beta laws from the configured moments and a Dirichlet
/// proportional to the forward-map law at the prior means.
EstimatorState make_estimator(const CircuitSpec& circuit, const PriorConfig& prior, const GridSpec& grid);

struct AdaptiveUpdate {
  EstimatorState state;
  NoiseParams params;
  QuasiProbabilityDistribution qpd;
};

/// Folds one period of undecorated-circuit counts into the posteriors and rebuilds the QPD.
AdaptiveUpdate adaptive_update(const EstimatorState& state, const CountsTable& counts);

}  // namespace pecsim

#endif
