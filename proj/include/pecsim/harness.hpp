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

#ifndef PECSIM_HARNESS_HPP
#define PECSIM_HARNESS_HPP

/**
 * \file
 * \brief Drift experiments comparing raw, readout-mitigated, static PEC and
 * adaptive PEC estimates period by period.
 */

#include "pecsim/bayes.hpp"
#include "pecsim/bv_circuit.hpp"
#include "pecsim/noise.hpp"
#include "pecsim/pec.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pecsim {

enum class Pipeline { kRaw, kRoem, kPecStatic, kPecAdaptive };

inline constexpr std::array<Pipeline, 4> kAllPipelines = {Pipeline::kRaw, Pipeline::kRoem, Pipeline::kPecStatic,
                                                          Pipeline::kPecAdaptive};

std::string_view pipeline_name(Pipeline p);
Pipeline parse_pipeline(std::string_view name);

struct ExperimentConfig {
  SecretString secret{"1000"};
  std::uint64_t shots = 10000;
  DriftSpec drift;
  GridSpec grid;
  PriorConfig prior;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<Pipeline> pipelines{kAllPipelines.begin(), kAllPipelines.end()};

  void validate() const;
};

/// SPAM means 0.96..0.92 falling 0.01 per period, both depolarizing means 0.017
/// rising 0.01 per period, ten periods, 10000 shots, priors at the period-0 means.
ExperimentConfig default_config();

/// Priors equal to the drift's period-0 means with the drift variances
/// (or 1e-4 where a drift variance is zero).
PriorConfig prior_from_drift(const DriftSpec& drift);

/// Mean over qubits of |estimate_q - ideal_q|.
double accuracy_register(std::span<const double> estimates, std::span<const double> ideal);

/// Mean over qubits of |estimate_q(t) - estimate_q(baseline)|.
double stability_register(std::span<const double> estimates, std::span<const double> baseline);

/// Per-qubit inversion of the symmetric assignment matrix: noisy_q / (2 f_q - 1).
std::vector<double> roem_correct(std::span<const double> expectations, std::span<const double> fidelity);

struct PipelineOutcome {
  std::vector<double> expectations;
  double eps_r = 0.0;
  double s_r = 0.0;
};

struct PeriodResult {
  int period = 0;
  NoiseParams realized;
  std::map<Pipeline, PipelineOutcome> pipelines;
  /// Adaptive pipeline only.
  std::optional<NoiseParams> adaptive_estimate;
  std::optional<double> adaptive_gamma;
  /// Set when a module error aborted the period.
  std::optional<std::string> failure;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<PeriodResult> periods;
};

struct PipelineSummary {
  /// Averaged over periods, then seeds.
  double mean_eps_r = 0.0;
  double mean_s_r = 0.0;
  /// Final period, averaged over seeds.
  double final_eps_r = 0.0;
  double final_s_r = 0.0;
  /// Seed-averaged value per period.
  std::vector<double> period_eps_r;
  std::vector<double> period_s_r;
};

struct Improvement {
  std::optional<double> accuracy_mean_pct;
  std::optional<double> stability_mean_pct;
  std::optional<double> accuracy_final_pct;
  std::optional<double> stability_final_pct;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedResult> seeds;
  std::map<Pipeline, PipelineSummary> summary;
  /// Adaptive relative to static PEC; empty unless both ran.
  Improvement improvement;
};

/// 100 (static - adaptive) / static, or nothing when static < 1e-12.
std::optional<double> improvement_pct(double static_value, double adaptive_value);

/// One seed's periods 1..T. Deterministic in (config, seed).
SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Aggregates per-seed results into summaries and improvement percentages.
void summarize(ExperimentReport& report);

/// Stream seed for the counts of period t.
std::uint64_t counts_seed(std::uint64_t seed, int period);

/// Counts keyed by (period, circuit_index).
struct CountsFile {
  int n_qubits = 0;
  std::map<std::pair<int, std::uint64_t>, CountsTable> tables;

  friend bool operator==(const CountsFile&, const CountsFile&) = default;
};

/// All basis-circuit counts of one simulated period, keyed by `period`.
void add_period_counts(CountsFile& file, int period, const std::vector<CountsTable>& counts);

struct PeriodEstimate {
  int period = 0;
  NoiseParams params;
  double gamma = 0.0;
  double mse = 0.0;
  /// Present when every basis circuit of the period has counts.
  std::optional<std::vector<double>> mitigated;
  std::optional<double> eps_r;
};

/// Runs the adaptive estimator over the periods of `counts` in ascending order,
/// folding in each period's circuit-0 counts.
std::vector<PeriodEstimate> estimate_from_counts(const CountsFile& counts, const SecretString& secret,
                                                 const PriorConfig& prior, const GridSpec& grid);

}  // namespace pecsim

#endif
