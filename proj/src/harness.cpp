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

#include "pecsim/harness.hpp"

#include "pecsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pecsim {

namespace {

bool wants(const ExperimentConfig& c, Pipeline p) {
  return std::find(c.pipelines.begin(), c.pipelines.end(), p) != c.pipelines.end();
}

std::vector<double> to_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

NoiseParams prior_means(const PriorConfig& prior) {
  return {prior.spam_mean, prior.depol_control_mean, prior.depol_target_mean};
}

}  // namespace

std::string_view pipeline_name(Pipeline p) {
  switch (p) {
    case Pipeline::kRaw:
      return "raw";
    case Pipeline::kRoem:
      return "roem";
    case Pipeline::kPecStatic:
      return "pec_static";
    case Pipeline::kPecAdaptive:
      return "pec_adaptive";
  }
  return "unknown";
}

Pipeline parse_pipeline(std::string_view name) {
  for (auto p : kAllPipelines) {
    if (pipeline_name(p) == name) return p;
  }
  throw InvalidInput("unknown pipeline '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (pipelines.empty()) throw InvalidInput("at least one pipeline required");
  if (shots < 1) throw InvalidInput("shots must be at least 1");
  if (seeds.empty()) throw InvalidInput("at least one seed required");
  if (drift.spam.size() != static_cast<std::size_t>(secret.length() + 1)) {
    throw InvalidInput("drift needs one SPAM entry per qubit");
  }
  drift.validate();
  grid.validate();
}

PriorConfig prior_from_drift(const DriftSpec& drift) {
  PriorConfig p;
  for (const auto& e : drift.spam) {
    p.spam_mean.push_back(e.initial_mean);
    p.spam_variance.push_back(e.variance > 0.0 ? e.variance : 1e-4);
  }
  p.depol_control_mean = drift.depol_control.initial_mean;
  p.depol_target_mean = drift.depol_target.initial_mean;
  return p;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.drift.n_periods = 10;
  for (double f : {0.96, 0.95, 0.94, 0.93, 0.92}) c.drift.spam.push_back({f, -0.01, 1e-4});
  c.drift.depol_control = {0.017, 0.01, 1e-5};
  c.drift.depol_target = {0.017, 0.01, 1e-5};
  c.prior = prior_from_drift(c.drift);
  return c;
}

double accuracy_register(std::span<const double> estimates, std::span<const double> ideal) {
  if (estimates.size() != ideal.size() || estimates.empty()) throw InvalidInput("register length mismatch");
  double s = 0.0;
  for (std::size_t q = 0; q < estimates.size(); ++q) s += std::abs(estimates[q] - ideal[q]);
  return s / static_cast<double>(estimates.size());
}

double stability_register(std::span<const double> estimates, std::span<const double> baseline) {
  return accuracy_register(estimates, baseline);
}

std::vector<double> roem_correct(std::span<const double> expectations, std::span<const double> fidelity) {
  if (expectations.size() != fidelity.size()) throw InvalidInput("one fidelity per qubit required");
  std::vector<double> out(expectations.size());
  for (std::size_t q = 0; q < out.size(); ++q) {
    if (!(fidelity[q] > 0.5)) throw SingularParameter("readout inversion needs f > 0.5");
    out[q] = expectations[q] / (2.0 * fidelity[q] - 1.0);
  }
  return out;
}

std::uint64_t counts_seed(std::uint64_t seed, int period) {
  // splitmix64 finalizer over (seed, period)
  std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(period) + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SeedResult run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  const CircuitSpec circuit = build_bv(config.secret);
  const auto ideal = to_double(ideal_expectations(config.secret));
  const NoiseTrajectory traj = generate_trajectory(config.drift, seed);
  const bool need_pec = wants(config, Pipeline::kPecStatic) || wants(config, Pipeline::kPecAdaptive);
  const double x_max = std::max(config.drift.x_max, config.grid.depol.max);

  std::optional<QuasiProbabilityDistribution> static_qpd;
  if (wants(config, Pipeline::kPecStatic)) static_qpd = composite_qpd(prior_means(config.prior), circuit, x_max);
  std::optional<EstimatorState> estimator;
  if (wants(config, Pipeline::kPecAdaptive)) estimator = make_estimator(circuit, config.prior, config.grid);

  SeedResult result{seed, {}};
  std::map<Pipeline, std::vector<double>> baseline;

  for (int t = 1; t <= config.drift.n_periods; ++t) {
    PeriodResult pr;
    pr.period = t;
    pr.realized = traj.periods[static_cast<std::size_t>(t - 1)];
    try {
      auto dists = basis_distributions(circuit, pr.realized);
      if (!need_pec) dists.resize(1);
      const auto counts = sample_basis_counts(dists, config.shots, counts_seed(seed, t));
      const ExpectationTable exps = expectations_from_counts(counts);

      for (auto p : config.pipelines) {
        std::vector<double> e;
        switch (p) {
          case Pipeline::kRaw:
            e = exps[0];
            break;
          case Pipeline::kRoem:
            e = roem_correct(exps[0], config.prior.spam_mean);
            break;
          case Pipeline::kPecStatic:
            e = full_sum_estimate(exps, *static_qpd).values;
            break;
          case Pipeline::kPecAdaptive: {
            AdaptiveUpdate upd = adaptive_update(*estimator, counts[0]);
            e = full_sum_estimate(exps, upd.qpd).values;
            pr.adaptive_estimate = upd.params;
            pr.adaptive_gamma = upd.qpd.gamma();
            estimator = std::move(upd.state);
            break;
          }
        }
        pr.pipelines[p] = {std::move(e), 0.0, 0.0};
      }
      for (auto& [p, outcome] : pr.pipelines) {
        outcome.eps_r = accuracy_register(outcome.expectations, ideal);
        if (!baseline.count(p)) baseline[p] = outcome.expectations;
        outcome.s_r = stability_register(outcome.expectations, baseline[p]);
      }
    } catch (const std::exception& ex) {
      pr.pipelines.clear();
      pr.failure = ex.what();
    }
    result.periods.push_back(std::move(pr));
  }
  return result;
}

std::optional<double> improvement_pct(double static_value, double adaptive_value) {
  if (static_value < 1e-12) return std::nullopt;
  return 100.0 * (static_value - adaptive_value) / static_value;
}

void summarize(ExperimentReport& report) {
  report.summary.clear();
  const int n_periods = report.config.drift.n_periods;
  for (auto p : report.config.pipelines) {
    PipelineSummary s;
    s.period_eps_r.assign(static_cast<std::size_t>(n_periods), 0.0);
    s.period_s_r.assign(static_cast<std::size_t>(n_periods), 0.0);
    std::vector<int> period_n(static_cast<std::size_t>(n_periods), 0);
    int seeds_used = 0;
    int finals_used = 0;
    for (const auto& sr : report.seeds) {
      double eps = 0.0;
      double stab = 0.0;
      int used = 0;
      for (const auto& pr : sr.periods) {
        auto it = pr.pipelines.find(p);
        if (it == pr.pipelines.end()) continue;
        eps += it->second.eps_r;
        stab += it->second.s_r;
        ++used;
        const auto idx = static_cast<std::size_t>(pr.period - 1);
        s.period_eps_r[idx] += it->second.eps_r;
        s.period_s_r[idx] += it->second.s_r;
        ++period_n[idx];
        if (pr.period == n_periods) {
          s.final_eps_r += it->second.eps_r;
          s.final_s_r += it->second.s_r;
          ++finals_used;
        }
      }
      if (used == 0) continue;
      s.mean_eps_r += eps / used;
      s.mean_s_r += stab / used;
      ++seeds_used;
    }
    if (seeds_used > 0) {
      s.mean_eps_r /= seeds_used;
      s.mean_s_r /= seeds_used;
    }
    if (finals_used > 0) {
      s.final_eps_r /= finals_used;
      s.final_s_r /= finals_used;
    }
    for (std::size_t i = 0; i < period_n.size(); ++i) {
      if (period_n[i] == 0) continue;
      s.period_eps_r[i] /= period_n[i];
      s.period_s_r[i] /= period_n[i];
    }
    report.summary[p] = std::move(s);
  }

  report.improvement = {};
  auto st = report.summary.find(Pipeline::kPecStatic);
  auto ad = report.summary.find(Pipeline::kPecAdaptive);
  if (st != report.summary.end() && ad != report.summary.end()) {
    report.improvement.accuracy_mean_pct = improvement_pct(st->second.mean_eps_r, ad->second.mean_eps_r);
    report.improvement.stability_mean_pct = improvement_pct(st->second.mean_s_r, ad->second.mean_s_r);
    report.improvement.accuracy_final_pct = improvement_pct(st->second.final_eps_r, ad->second.final_eps_r);
    report.improvement.stability_final_pct = improvement_pct(st->second.final_s_r, ad->second.final_s_r);
  }
}

void add_period_counts(CountsFile& file, int period, const std::vector<CountsTable>& counts) {
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (file.n_qubits == 0) file.n_qubits = counts[k].n_qubits();
    if (counts[k].n_qubits() != file.n_qubits) throw InvalidInput("counts width differs from the file");
    file.tables.insert_or_assign({period, k}, counts[k]);
  }
}

std::vector<PeriodEstimate> estimate_from_counts(const CountsFile& counts, const SecretString& secret,
                                                 const PriorConfig& prior, const GridSpec& grid) {
  const CircuitSpec circuit = build_bv(secret);
  if (counts.n_qubits != circuit.n_qubits) {
    throw InvalidInput("counts cover " + std::to_string(counts.n_qubits) + " qubits, secret needs " +
                       std::to_string(circuit.n_qubits));
  }
  const auto ideal = to_double(ideal_expectations(secret));
  const std::uint64_t n_circuits = basis_circuit_count(circuit);
  EstimatorState state = make_estimator(circuit, prior, grid);

  std::vector<PeriodEstimate> out;
  auto it = counts.tables.begin();
  while (it != counts.tables.end()) {
    const int period = it->first.first;
    std::vector<const CountsTable*> row(n_circuits, nullptr);
    for (; it != counts.tables.end() && it->first.first == period; ++it) {
      if (it->first.second >= n_circuits) {
        throw InvalidInput("circuit index " + std::to_string(it->first.second) + " out of range");
      }
      row[it->first.second] = &it->second;
    }
    if (row[0] == nullptr) throw InvalidInput("period " + std::to_string(period) + " lacks circuit 0 counts");

    AdaptiveUpdate upd = adaptive_update(state, *row[0]);
    PeriodEstimate pe;
    pe.period = period;
    pe.params = upd.params;
    pe.gamma = upd.qpd.gamma();
    pe.mse = upd.state.last_mse;
    if (std::all_of(row.begin(), row.end(), [](const CountsTable* c) { return c != nullptr; })) {
      std::vector<CountsTable> tables;
      tables.reserve(row.size());
      for (const auto* c : row) tables.push_back(*c);
      pe.mitigated = full_sum_estimate(expectations_from_counts(tables), upd.qpd).values;
      pe.eps_r = accuracy_register(*pe.mitigated, ideal);
    }
    state = std::move(upd.state);
    out.push_back(std::move(pe));
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.seeds.resize(config.seeds.size());

  // Seeds are independent; each slot is written by exactly one iteration.
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(config.seeds.size()); ++i) {
    report.seeds[static_cast<std::size_t>(i)] = run_seed(config, config.seeds[static_cast<std::size_t>(i)]);
  }
  summarize(report);
  return report;
}

}  // namespace pecsim
