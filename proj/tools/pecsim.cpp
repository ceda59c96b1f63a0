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


// Command-line front end: drift experiments, QPD tables, estimation from
// counts files and report summaries.

#include "pecsim/errors.hpp"
#include "pecsim/harness.hpp"
#include "pecsim/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace pecsim;
using nlohmann::json;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw InvalidInput("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Basis-circuit count is 16^m 2^n for m CNOTs; beyond two it stops being desk scale.
CircuitSpec build_checked(const SecretString& secret) {
  CircuitSpec c = build_bv(secret);
  if (c.cnot_pairs.size() > 2) {
    std::fprintf(stderr, "warning: secret %s needs %zu CNOTs, %llu basis circuits per period\n", secret.str().c_str(),
                 c.cnot_pairs.size(), static_cast<unsigned long long>(basis_circuit_count(c)));
  }
  return c;
}

void print_summary(const json& report) {
  std::printf("%-14s %12s %12s %12s %12s\n", "pipeline", "mean eps_R", "mean s_R", "final eps_R", "final s_R");
  for (const auto& [name, s] : report.at("summary").items()) {
    std::printf("%-14s %12.6f %12.6f %12.6f %12.6f\n", name.c_str(), s.at("mean_eps_R").get<double>(),
                s.at("mean_s_R").get<double>(), s.at("final_eps_R").get<double>(), s.at("final_s_R").get<double>());
  }
  const auto& imp = report.at("improvement");
  const auto pct = [&](const char* key) {
    const auto& v = imp.at(key);
    if (v.is_null()) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v.get<double>());
    return std::string(buf);
  };
  std::printf("adaptive vs static: accuracy %s, stability %s (final period: %s, %s)\n",
              pct("accuracy_mean_pct").c_str(), pct("stability_mean_pct").c_str(), pct("accuracy_final_pct").c_str(),
              pct("stability_final_pct").c_str());
  for (const auto& seed : report.at("seeds")) {
    for (const auto& period : seed.at("periods")) {
      if (!period.at("failure").is_null()) {
        std::printf("seed %s period %s failed: %s\n", seed.at("seed").dump().c_str(), period.at("period").dump().c_str(),
                    period.at("failure").get<std::string>().c_str());
      }
    }
  }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::string& seeds) {
  ExperimentConfig config = config_path.empty() ? default_config() : load_config(config_path);
  if (!seeds.empty()) {
    config.seeds.clear();
    for (double s : parse_list(seeds)) config.seeds.push_back(static_cast<std::uint64_t>(s));
  }
  build_checked(config.secret);
  const ExperimentReport report = run_experiment(config);
  write_report(report, out_dir);
  print_summary(report_to_json(report));
  return 0;
}

int cmd_qpd(const std::string& spam, double xc, double xt, const std::string& secret, bool as_json) {
  const CircuitSpec circuit = build_checked(SecretString(secret));
  const NoiseParams params{parse_list(spam), xc, xt};
  const auto qpd = composite_qpd(params, circuit);
  if (as_json) {
    json rows = json::array();
    for (std::uint64_t k = 0; k < qpd.size(); ++k) {
      const auto d = decode_basis_index(circuit, k);
      std::string paulis;
      for (const auto& [c, t] : d.cnot_paulis) paulis += std::string{c, t};
      std::string mask;
      for (int q = 0; q < circuit.n_qubits; ++q) mask += ((d.spam_mask >> q) & 1U) ? '1' : '0';
      rows.push_back({{"k", k}, {"cnot_paulis", paulis}, {"spam_mask", mask}, {"eta", qpd.eta()[k]}, {"q", qpd.weights()[k]}});
    }
    std::cout << dump_json({{"gamma", qpd.gamma()}, {"entries", rows}});
    return 0;
  }
  std::printf("k,cnot_paulis,spam_mask,eta,q\n");
  for (std::uint64_t k = 0; k < qpd.size(); ++k) {
    const auto d = decode_basis_index(circuit, k);
    std::string paulis;
    for (const auto& [c, t] : d.cnot_paulis) paulis += std::string{c, t};
    std::string mask;
    for (int q = 0; q < circuit.n_qubits; ++q) mask += ((d.spam_mask >> q) & 1U) ? '1' : '0';
    std::printf("%llu,%s,%s,%s,%s\n", static_cast<unsigned long long>(k), paulis.c_str(), mask.c_str(),
                format_double(qpd.eta()[k]).c_str(), format_double(qpd.weights()[k]).c_str());
  }
  std::fprintf(stderr, "gamma = %s\n", format_double(qpd.gamma()).c_str());
  return 0;
}

int cmd_estimate(const std::string& counts_path, const std::string& prior_path, const std::string& grid,
                 const std::string& secret, std::uint64_t shots, const std::string& out_path) {
  const CountsFile counts = load_counts(counts_path, shots > 0 ? std::optional<std::uint64_t>(shots) : std::nullopt);
  std::ifstream in(prior_path);
  if (!in) throw InvalidInput("cannot open " + prior_path);
  const PriorConfig prior = prior_from_json(json::parse(in));
  build_checked(SecretString(secret));
  const auto estimates = estimate_from_counts(counts, SecretString(secret), prior, parse_grid_spec(grid));

  json records = json::array();
  for (const auto& e : estimates) {
    json r = {{"period", e.period}, {"params", noise_to_json(e.params)}, {"gamma", e.gamma}, {"inversion_mse", e.mse}};
    r["mitigated"] = e.mitigated ? json(*e.mitigated) : json(nullptr);
    r["eps_R"] = e.eps_r ? json(*e.eps_r) : json(nullptr);
    records.push_back(std::move(r));
  }
  const std::string text = dump_json({{"schema_version", kReportSchemaVersion}, {"estimates", records}});
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open " + out_path + " for writing");
    out << text;
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
  const ExperimentConfig config = config_path.empty() ? default_config() : load_config(config_path);
  const CircuitSpec circuit = build_checked(config.secret);
  const NoiseTrajectory traj = generate_trajectory(config.drift, seed);
  CountsFile file;
  for (int t = 1; t <= config.drift.n_periods; ++t) {
    const auto dists = basis_distributions(circuit, traj.periods[static_cast<std::size_t>(t - 1)]);
    add_period_counts(file, t, sample_basis_counts(dists, config.shots, counts_seed(seed, t)));
  }
  save_counts(out_path, file);
  return 0;
}

int cmd_metrics(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw InvalidInput("cannot open " + report_path);
  const json report = json::parse(in);
  if (report.value("schema_version", 0) != kReportSchemaVersion) throw InvalidInput("unsupported report schema");
  print_summary(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive probabilistic error cancellation under drifting noise"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seeds;
  auto* run = app.add_subcommand("run", "Run the drift experiment and write a report");
  run->add_option("--config", config_path, "Experiment config (JSON); default schedule if omitted");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seeds", seeds, "Comma-separated seeds overriding the config");

  std::string spam;
  double xc = 0.0;
  double xt = 0.0;
  std::string secret = "1000";
  bool as_json = false;
  auto* qpd = app.add_subcommand("qpd", "Print the composite quasi-probability table");
  qpd->add_option("--spam", spam, "Comma-separated SPAM fidelities, qubit 0 first")->required();
  qpd->add_option("--xc", xc, "Control depolarizing parameter")->required();
  qpd->add_option("--xt", xt, "Target depolarizing parameter")->required();
  qpd->add_option("--secret", secret, "Secret string");
  qpd->add_flag("--json", as_json, "Emit JSON instead of CSV");

  std::string counts_path;
  std::string prior_path;
  std::string grid = "default";
  std::uint64_t shots = 0;
  std::string est_out;
  auto* estimate = app.add_subcommand("estimate", "Estimate noise parameters from a counts file");
  estimate->add_option("--counts", counts_path, "Counts CSV")->required();
  estimate->add_option("--prior", prior_path, "Prior (JSON)")->required();
  estimate->add_option("--grid", grid, "'default' or f=min:max:step,x=min:max:step,refine=N");
  estimate->add_option("--secret", secret, "Secret string");
  estimate->add_option("--shots", shots, "Required shots per (period, circuit); any uniform total if omitted");
  estimate->add_option("--out", est_out, "Write JSON here instead of stdout");

  std::string sim_config;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Write synthetic counts for every period of one seed");
  simulate->add_option("--config", sim_config, "Experiment config (JSON); default schedule if omitted");
  simulate->add_option("--seed", sim_seed, "Seed");
  simulate->add_option("--out", sim_out, "Counts CSV")->required();

  std::string report_path;
  auto* metrics = app.add_subcommand("metrics", "Summarize a report");
  metrics->add_option("--report", report_path, "report.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, seeds);
    if (*qpd) return cmd_qpd(spam, xc, xt, secret, as_json);
    if (*estimate) return cmd_estimate(counts_path, prior_path, grid, secret, shots, est_out);
    if (*simulate) return cmd_simulate(sim_config, sim_seed, sim_out);
    if (*metrics) return cmd_metrics(report_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
