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


// Times the OpenMP kernels against their serial references and checks that
// both produce identical results.

#include "pecsim/bayes.hpp"
#include "pecsim/bv_circuit.hpp"
#include "pecsim/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

using namespace pecsim;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.4f s  openmp %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool all_same = true;

  const auto circuit = build_bv(SecretString("1000"));
  const auto params = mean_params(default_config().drift, 1);
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
  const double s1 = best_of(reps, [&] { a = basis_distributions_serial(circuit, params); });
  const double p1 = best_of(reps, [&] { b = basis_distributions(circuit, params); });
  report("basis_distributions", s1, p1, a == b);
  all_same = all_same && a == b;

  const auto map = fit_forward_map(4, correlated_block_simulator(circuit));
  const std::vector<double> theta{0.927, 0.913, 0.012, 0.021};
  const auto targets = map.evaluate(theta);
  const GridSpec grid;
  Axes axes(4);
  for (std::size_t i = 0; i < grid.fidelity.size(); ++i) axes[0].push_back(grid.fidelity.value(i));
  axes[1] = axes[0];
  for (std::size_t i = 0; i < grid.depol.size(); ++i) axes[2].push_back(grid.depol.value(i));
  axes[3] = axes[2];
  InversionResult r1;
  InversionResult r2;
  const double s2 = best_of(reps, [&] { r1 = grid_argmin_serial(targets, map, axes); });
  const double p2 = best_of(reps, [&] { r2 = grid_argmin(targets, map, axes); });
  const bool same = r1.theta == r2.theta && r1.mse == r2.mse;
  report("grid_argmin", s2, p2, same);
  all_same = all_same && same;

  return all_same ? 0 : 1;
}
