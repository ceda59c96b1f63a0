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

#ifndef PECSIM_IO_HPP
#define PECSIM_IO_HPP

#include "pecsim/harness.hpp"
#include "pecsim/qsim.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace pecsim {

inline constexpr int kReportSchemaVersion = 1;

/// Parses `period,circuit_index,bitstring,count` rows. Every (period, circuit)
/// group must total `expected_shots`, or all groups the same total when it is
/// not given. Errors carry the 1-based line number.
CountsFile read_counts(std::istream& in, std::optional<std::uint64_t> expected_shots = std::nullopt);
CountsFile load_counts(const std::filesystem::path& path,
                       std::optional<std::uint64_t> expected_shots = std::nullopt);

/// Rows in ascending (period, circuit, bitstring index); zero counts omitted.
void write_counts(std::ostream& out, const CountsFile& counts);
void save_counts(const std::filesystem::path& path, const CountsFile& counts);

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Keys spam_mean[], spam_variance[], depol_control_mean, depol_target_mean,
/// optional dirichlet_pseudo_count.
PriorConfig prior_from_json(const nlohmann::json& j);

/// "default", or comma-separated f=min:max:step, x=min:max:step, refine=N.
GridSpec parse_grid_spec(std::string_view spec);

nlohmann::json noise_to_json(const NoiseParams& params);
nlohmann::json report_to_json(const ExperimentReport& report);

/// JSON text with every floating value printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// %.17g
std::string format_double(double v);

/// Writes report.json, periods.csv and accuracy_stability.csv into `dir`.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace pecsim

#endif
