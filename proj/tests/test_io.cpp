#include "pecsim/errors.hpp"
#include "pecsim/io.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pecsim;
namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader = "period,circuit_index,bitstring,count\n";

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_counts(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pecsim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("counts round trip") {
  CountsFile f;
  f.n_qubits = 3;
  f.tables.emplace(std::make_pair(1, std::uint64_t{0}), CountsTable(3, {{"000", 7}, {"101", 3}}));
  f.tables.emplace(std::make_pair(2, std::uint64_t{5}), CountsTable(3, {{"111", 10}}));
  std::ostringstream out;
  write_counts(out, f);
  CHECK(out.str() == std::string(kHeader) + "1,0,000,7\n1,0,101,3\n2,5,111,10\n");
  std::istringstream in(out.str());
  CHECK(read_counts(in) == f);
  std::istringstream in2(out.str());
  CHECK(read_counts(in2, 10) == f);
}

TEST_CASE("counts parse errors carry line numbers") {
  CHECK(parse_error_line(std::string(kHeader) + "1,0,00,5\n1,0,00,5\n") == 3);
  CHECK(parse_error_line(std::string(kHeader) + "1,0,00,5\n1,0,011,5\n") == 3);
  CHECK(parse_error_line(std::string(kHeader) + "1,0,0a,5\n") == 2);
  CHECK(parse_error_line(std::string(kHeader) + "1,0,00\n") == 2);
  CHECK(parse_error_line(std::string(kHeader) + "1,0,00,-4\n") == 2);
  CHECK(parse_error_line("period,circuit,bitstring,count\n1,0,00,5\n") == 1);
  CHECK(parse_error_line("period,circuit_index,bitstring,count\r\n1,0,00,5\r\n") == 1);
  CHECK(parse_error_line("") == 1);
}

TEST_CASE("counts totals are checked") {
  const std::string uneven = std::string(kHeader) + "1,0,00,5\n1,1,00,4\n";
  std::istringstream a(uneven);
  CHECK_THROWS_AS(read_counts(a), ParseError);
  const std::string even = std::string(kHeader) + "1,0,00,5\n1,1,01,5\n";
  std::istringstream b(even);
  CHECK_NOTHROW(read_counts(b));
  std::istringstream c(even);
  CHECK_THROWS_AS(read_counts(c, 6), ParseError);
}

TEST_CASE("a full 512-circuit, 13-period file loads quickly") {
  const auto circuit = build_bv(SecretString("1000"));
  const auto dists = basis_distributions(circuit, mean_params(default_config().drift, 1));
  CountsFile f;
  for (int t = 1; t <= 13; ++t) add_period_counts(f, t, sample_basis_counts(dists, 10000, counts_seed(9, t)));
  const auto dir = scratch_dir("big_counts");
  save_counts(dir / "counts.csv", f);
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load_counts(dir / "counts.csv", 10000);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(loaded == f);
  CHECK(loaded.tables.size() == 512 * 13);
  CHECK(secs < 5.0);
  fs::remove_all(dir);
}

TEST_CASE("grid spec strings") {
  const auto d = parse_grid_spec("default");
  CHECK(d.fidelity.min == 0.5);
  CHECK(d.depol.step == 0.005);
  const auto g = parse_grid_spec("f=0.8:1:0.02,x=0:0.1:0.01,refine=2");
  CHECK(g.fidelity.min == 0.8);
  CHECK(g.fidelity.max == 1.0);
  CHECK(g.fidelity.step == 0.02);
  CHECK(g.depol.max == 0.1);
  CHECK(g.refinement_levels == 2);
  CHECK_THROWS_AS(parse_grid_spec("f=0.8:1"), InvalidInput);
  CHECK_THROWS_AS(parse_grid_spec("q=1:2:3"), InvalidInput);
  CHECK_THROWS_AS(parse_grid_spec("f"), InvalidInput);
}

TEST_CASE("config JSON round trip") {
  auto c = default_config();
  c.shots = 2000;
  c.seeds = {3, 4};
  c.pipelines = {Pipeline::kRaw, Pipeline::kPecAdaptive};
  c.grid.refinement_levels = 1;
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.pipelines == c.pipelines);
  CHECK(back.seeds == c.seeds);

  const auto partial = config_from_json(nlohmann::json::parse(R"({"shots": 500, "grid": "refine=1"})"));
  CHECK(partial.shots == 500);
  CHECK(partial.grid.refinement_levels == 1);
  CHECK(partial.drift.spam.size() == 5);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"pipelines": ["bogus"]})")), InvalidInput);
}

TEST_CASE("floating output keeps 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  const nlohmann::json j = {{"b", 0.1}, {"a", 2}, {"c", nullptr}};
  const auto s = dump_json(j, 0);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(std::stod(s.substr(s.find("0.1"))) == 0.1);
}

TEST_CASE("reports are byte-identical across regenerations") {
  auto c = default_config();
  c.drift.n_periods = 2;
  c.seeds = {1, 2};
  const auto d1 = scratch_dir("report_a");
  const auto d2 = scratch_dir("report_b");
  write_report(run_experiment(c), d1);
  write_report(run_experiment(c), d2);
  for (const char* name : {"report.json", "periods.csv", "accuracy_stability.csv"}) {
    CAPTURE(name);
    const auto a = slurp(d1 / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(d2 / name));
  }
  const auto j = nlohmann::json::parse(slurp(d1 / "report.json"));
  CHECK(j.at("schema_version") == kReportSchemaVersion);
  const auto periods = slurp(d1 / "periods.csv");
  CHECK(periods.rfind("seed,period,", 0) == 0);
  fs::remove_all(d1);
  fs::remove_all(d2);
}
