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

#include "pecsim/io.hpp"

#include "pecsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pecsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kCountsHeader = "period,circuit_index,bitstring,count";

template <typename T>
T parse_integer(std::string_view field, std::size_t line, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  // std::from_chars for double is available in GCC 11.
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw InvalidInput("bad number '" + std::string(s) + "'");
  return v;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open " + path.string() + " for writing");
  return out;
}

void dump_value(const json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent > 0 ? ": " : ":";
        dump_value(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_value(v, out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

json axis_to_json(const AxisSpec& a) { return {{"min", a.min}, {"max", a.max}, {"step", a.step}}; }

AxisSpec axis_from_json(const json& j) { return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("step").get<double>()}; }

DriftEntry drift_entry_from_json(const json& j) {
  DriftEntry e;
  e.initial_mean = j.at("mean").get<double>();
  e.per_period_delta = j.value("delta", 0.0);
  e.variance = j.value("variance", 0.0);
  return e;
}

json drift_entry_to_json(const DriftEntry& e) {
  return {{"mean", e.initial_mean}, {"delta", e.per_period_delta}, {"variance", e.variance}};
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_value(j, out, indent, 0);
  out += '\n';
  return out;
}

CountsFile read_counts(std::istream& in, std::optional<std::uint64_t> expected_shots) {
  CountsFile file;
  std::map<std::pair<int, std::uint64_t>, std::vector<char>> seen;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') throw ParseError(line_no, "CRLF line ending");
    if (!header_seen) {
      if (line != kCountsHeader) throw ParseError(line_no, "expected header '" + std::string(kCountsHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));

    const int period = parse_integer<int>(fields[0], line_no, "period");
    const auto circuit = parse_integer<std::uint64_t>(fields[1], line_no, "circuit_index");
    const std::string_view bits = fields[2];
    const auto count = parse_integer<std::uint64_t>(fields[3], line_no, "count");

    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxQubits) ||
        bits.find_first_not_of("01") != std::string_view::npos) {
      throw ParseError(line_no, "bad bitstring '" + std::string(bits) + "'");
    }
    const int n = static_cast<int>(bits.size());
    if (file.n_qubits == 0) file.n_qubits = n;
    if (n != file.n_qubits) {
      throw ParseError(line_no, "bitstring length " + std::to_string(n) + ", expected " + std::to_string(file.n_qubits));
    }

    const auto key = std::make_pair(period, circuit);
    auto [it, inserted] = file.tables.try_emplace(key, n);
    auto& flags = seen[key];
    if (inserted) flags.assign(std::size_t{1} << n, 0);
    const auto idx = bitstring_index(bits);
    if (flags[idx]) {
      throw ParseError(line_no, "duplicate bitstring " + std::string(bits) + " for period " + std::to_string(period) +
                                    ", circuit " + std::to_string(circuit));
    }
    flags[idx] = 1;
    it->second.add(idx, count);
  }
  if (!header_seen) throw ParseError(line_no + 1, "missing header");

  std::optional<std::uint64_t> shots = expected_shots;
  for (const auto& [key, table] : file.tables) {
    if (!shots) shots = table.total_shots();
    if (table.total_shots() != *shots) {
      throw ParseError(line_no, "period " + std::to_string(key.first) + ", circuit " + std::to_string(key.second) +
                                    " totals " + std::to_string(table.total_shots()) + " shots, expected " +
                                    std::to_string(*shots));
    }
  }
  return file;
}

CountsFile load_counts(const fs::path& path, std::optional<std::uint64_t> expected_shots) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return read_counts(in, expected_shots);
}

void write_counts(std::ostream& out, const CountsFile& counts) {
  std::string buf;
  buf += kCountsHeader;
  buf += '\n';
  for (const auto& [key, table] : counts.tables) {
    const auto dense = table.dense();
    for (std::uint64_t i = 0; i < dense.size(); ++i) {
      if (dense[i] == 0) continue;
      buf += std::to_string(key.first);
      buf += ',';
      buf += std::to_string(key.second);
      buf += ',';
      buf += to_bitstring(i, table.n_qubits());
      buf += ',';
      buf += std::to_string(dense[i]);
      buf += '\n';
    }
  }
  out << buf;
}

void save_counts(const fs::path& path, const CountsFile& counts) {
  auto out = open_out(path);
  write_counts(out, counts);
}

PriorConfig prior_from_json(const json& j) {
  PriorConfig p;
  p.spam_mean = j.at("spam_mean").get<std::vector<double>>();
  p.spam_variance = j.at("spam_variance").get<std::vector<double>>();
  p.depol_control_mean = j.at("depol_control_mean").get<double>();
  p.depol_target_mean = j.at("depol_target_mean").get<double>();
  p.dirichlet_pseudo_count = j.value("dirichlet_pseudo_count", p.dirichlet_pseudo_count);
  if (p.spam_mean.size() != p.spam_variance.size()) throw InvalidInput("prior spam_mean/spam_variance length mismatch");
  return p;
}

GridSpec parse_grid_spec(std::string_view spec) {
  GridSpec g;
  if (spec.empty() || spec == "default") return g;
  for (auto item : split(spec, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidInput("grid item '" + std::string(item) + "' lacks '='");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "refine") {
      g.refinement_levels = parse_integer<int>(value, 0, "refine");
      continue;
    }
    const auto parts = split(value, ':');
    if (parts.size() != 3) throw InvalidInput("grid axis '" + std::string(item) + "' needs min:max:step");
    const AxisSpec axis{parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
    if (key == "f") {
      g.fidelity = axis;
    } else if (key == "x") {
      g.depol = axis;
    } else {
      throw InvalidInput("unknown grid key '" + std::string(key) + "'");
    }
  }
  g.validate();
  return g;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = default_config();
  if (j.contains("secret")) c.secret = SecretString(j.at("secret").get<std::string>());
  if (j.contains("shots")) c.shots = j.at("shots").get<std::uint64_t>();
  if (j.contains("periods")) c.drift.n_periods = j.at("periods").get<int>();

  bool drift_given = false;
  if (j.contains("drift")) {
    drift_given = true;
    const auto& d = j.at("drift");
    if (d.contains("spam")) {
      c.drift.spam.clear();
      for (const auto& e : d.at("spam")) c.drift.spam.push_back(drift_entry_from_json(e));
    }
    if (d.contains("depol")) {
      const auto& dp = d.at("depol");
      if (dp.contains("xc")) c.drift.depol_control = drift_entry_from_json(dp.at("xc"));
      if (dp.contains("xt")) c.drift.depol_target = drift_entry_from_json(dp.at("xt"));
    }
    if (d.contains("x_max")) c.drift.x_max = d.at("x_max").get<double>();
  }
  if (j.contains("priors")) {
    c.prior = prior_from_json(j.at("priors"));
  } else if (drift_given) {
    c.prior = prior_from_drift(c.drift);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.is_string()) {
      c.grid = parse_grid_spec(g.get<std::string>());
    } else {
      c.grid = GridSpec{};
      if (g.contains("fidelity")) c.grid.fidelity = axis_from_json(g.at("fidelity"));
      if (g.contains("depol")) c.grid.depol = axis_from_json(g.at("depol"));
      c.grid.refinement_levels = g.value("refine", 0);
    }
  }
  if (j.contains("pipelines")) {
    c.pipelines.clear();
    for (const auto& p : j.at("pipelines")) c.pipelines.push_back(parse_pipeline(p.get<std::string>()));
  }
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json spam = json::array();
  for (const auto& e : c.drift.spam) spam.push_back(drift_entry_to_json(e));
  json pipelines = json::array();
  for (auto p : c.pipelines) pipelines.push_back(std::string(pipeline_name(p)));
  return {
      {"secret", c.secret.str()},
      {"shots", c.shots},
      {"periods", c.drift.n_periods},
      {"drift",
       {{"spam", spam},
        {"depol", {{"xc", drift_entry_to_json(c.drift.depol_control)}, {"xt", drift_entry_to_json(c.drift.depol_target)}}},
        {"x_max", c.drift.x_max}}},
      {"priors",
       {{"spam_mean", c.prior.spam_mean},
        {"spam_variance", c.prior.spam_variance},
        {"depol_control_mean", c.prior.depol_control_mean},
        {"depol_target_mean", c.prior.depol_target_mean},
        {"dirichlet_pseudo_count", c.prior.dirichlet_pseudo_count}}},
      {"grid",
       {{"fidelity", axis_to_json(c.grid.fidelity)}, {"depol", axis_to_json(c.grid.depol)}, {"refine", c.grid.refinement_levels}}},
      {"pipelines", pipelines},
      {"seeds", c.seeds},
  };
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json noise_to_json(const NoiseParams& p) {
  return {{"spam_fidelity", p.spam_fidelity}, {"depol_control", p.depol_control}, {"depol_target", p.depol_target}};
}

json report_to_json(const ExperimentReport& report) {
  json seeds = json::array();
  for (const auto& sr : report.seeds) {
    json periods = json::array();
    for (const auto& pr : sr.periods) {
      json pipelines = json::object();
      for (const auto& [p, o] : pr.pipelines) {
        pipelines[std::string(pipeline_name(p))] = {{"expectations", o.expectations}, {"eps_R", o.eps_r}, {"s_R", o.s_r}};
      }
      json entry = {{"period", pr.period}, {"realized", noise_to_json(pr.realized)}, {"pipelines", pipelines}};
      entry["adaptive_estimate"] = pr.adaptive_estimate ? noise_to_json(*pr.adaptive_estimate) : json(nullptr);
      entry["adaptive_gamma"] = optional_to_json(pr.adaptive_gamma);
      entry["failure"] = pr.failure ? json(*pr.failure) : json(nullptr);
      periods.push_back(std::move(entry));
    }
    seeds.push_back({{"seed", sr.seed}, {"periods", periods}});
  }

  json summary = json::object();
  for (const auto& [p, s] : report.summary) {
    summary[std::string(pipeline_name(p))] = {
        {"mean_eps_R", s.mean_eps_r},        {"mean_s_R", s.mean_s_r},          {"final_eps_R", s.final_eps_r},
        {"final_s_R", s.final_s_r},          {"period_eps_R", s.period_eps_r}, {"period_s_R", s.period_s_r},
    };
  }
  const auto& imp = report.improvement;
  return {
      {"schema_version", kReportSchemaVersion},
      {"config", config_to_json(report.config)},
      {"seeds", seeds},
      {"summary", summary},
      {"improvement",
       {{"accuracy_mean_pct", optional_to_json(imp.accuracy_mean_pct)},
        {"stability_mean_pct", optional_to_json(imp.stability_mean_pct)},
        {"accuracy_final_pct", optional_to_json(imp.accuracy_final_pct)},
        {"stability_final_pct", optional_to_json(imp.stability_final_pct)}}},
  };
}

void write_report(const ExperimentReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "report.json");
    out << dump_json(report_to_json(report));
  }
  {
    std::ostringstream csv;
    csv << "seed,period,pipeline,qubit,expectation,eps_R,s_R\n";
    for (const auto& sr : report.seeds) {
      for (const auto& pr : sr.periods) {
        for (const auto& [p, o] : pr.pipelines) {
          for (std::size_t q = 0; q < o.expectations.size(); ++q) {
            csv << sr.seed << ',' << pr.period << ',' << pipeline_name(p) << ',' << q << ','
                << format_double(o.expectations[q]) << ',' << format_double(o.eps_r) << ',' << format_double(o.s_r)
                << '\n';
          }
        }
      }
    }
    auto out = open_out(dir / "periods.csv");
    out << csv.str();
  }
  {
    std::ostringstream csv;
    csv << "period,pipeline,eps_R,s_R\n";
    for (const auto& [p, s] : report.summary) {
      for (std::size_t t = 0; t < s.period_eps_r.size(); ++t) {
        csv << t + 1 << ',' << pipeline_name(p) << ',' << format_double(s.period_eps_r[t]) << ','
            << format_double(s.period_s_r[t]) << '\n';
      }
    }
    auto out = open_out(dir / "accuracy_stability.csv");
    out << csv.str();
  }
}

}  // namespace pecsim
