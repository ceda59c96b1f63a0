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

#include "pecsim/bayes.hpp"

#include "pecsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pecsim {

// ---------------------------------------------------------------------------
// Conjugate updates

BetaPosterior beta_from_mean_var(double mu, double v) {
  if (!(mu > 0.0 && mu < 1.0)) throw UnrepresentableMoments("Beta mean must lie in (0, 1)");
  if (!(v > 0.0 && v < mu * (1.0 - mu))) {
    throw UnrepresentableMoments("Beta variance must lie in (0, mu(1 - mu))");
  }
  const double k = mu * (1.0 - mu) / v - 1.0;
  return {mu * k, (1.0 - mu) * k};
}

BetaPosterior beta_update(const BetaPosterior& prior, std::uint64_t successes, std::uint64_t trials) {
  if (successes > trials) throw InvalidInput("more successes than trials");
  if (!(prior.alpha > 0.0 && prior.beta > 0.0)) throw InvalidInput("Beta parameters must be positive");
  return {prior.alpha + static_cast<double>(successes), prior.beta + static_cast<double>(trials - successes)};
}

DirichletPosterior dirichlet_update(const DirichletPosterior& prior, std::span<const std::uint64_t> counts) {
  if (counts.size() != prior.a.size()) throw InvalidInput("count vector length differs from the Dirichlet dimension");
  DirichletPosterior out = prior;
  for (std::size_t i = 0; i < counts.size(); ++i) out.a[i] += static_cast<double>(counts[i]);
  return out;
}

MarginalMoments dirichlet_marginal_moments(const DirichletPosterior& d, std::size_t i) {
  if (i >= d.a.size()) throw InvalidInput("Dirichlet component out of range");
  const double total = std::accumulate(d.a.begin(), d.a.end(), 0.0);
  const double ai = d.a[i];
  MarginalMoments m;
  m.mean = ai / total;
  m.variance = ai * (total - ai) / (total * total * (1.0 + total));
  m.beta = {ai, total - ai};
  return m;
}

// ---------------------------------------------------------------------------
// Forward map

ForwardMap::ForwardMap(int n_parameters, int n_outcomes, std::vector<std::vector<double>> corner_values)
    : n_parameters_(n_parameters), n_outcomes_(n_outcomes), corners_(std::move(corner_values)) {
  if (n_parameters < 1 || n_parameters > 16) throw InvalidInput("forward map parameter count out of range");
  if (corners_.size() != (std::size_t{1} << n_parameters)) throw InvalidInput("need one corner per vertex of the box");
  for (const auto& c : corners_) {
    if (c.size() != static_cast<std::size_t>(n_outcomes)) throw InvalidInput("corner has wrong outcome count");
  }
}

std::vector<double> ForwardMap::evaluate(std::span<const double> theta) const {
  if (theta.size() != static_cast<std::size_t>(n_parameters_)) throw InvalidInput("theta has wrong dimension");
  std::vector<double> out(static_cast<std::size_t>(n_outcomes_), 0.0);
  const int p = n_parameters_;
  for (std::size_t b = 0; b < corners_.size(); ++b) {
    double w = 1.0;
    for (int j = 0; j < p; ++j) {
      const double t = theta[static_cast<std::size_t>(j)];
      w *= ((b >> (p - 1 - j)) & 1U) ? t : 1.0 - t;
    }
    for (int i = 0; i < n_outcomes_; ++i) out[static_cast<std::size_t>(i)] += w * corners_[b][static_cast<std::size_t>(i)];
  }
  return out;
}

std::vector<std::vector<double>> ForwardMap::monomial_coefficients() const {
  // Mobius inversion over subsets of the corner bits.
  std::vector<std::vector<double>> c = corners_;
  const int p = n_parameters_;
  for (int j = 0; j < p; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t s = 0; s < c.size(); ++s) {
      if (!(s & bit)) continue;
      for (int i = 0; i < n_outcomes_; ++i) c[s][static_cast<std::size_t>(i)] -= c[s ^ bit][static_cast<std::size_t>(i)];
    }
  }
  return c;
}

ForwardMap fit_forward_map(int n_parameters, const BlockSimulator& simulator, int n_probes, std::uint64_t probe_seed) {
  const std::size_t n_corners = std::size_t{1} << n_parameters;
  std::vector<std::vector<double>> corners;
  corners.reserve(n_corners);
  std::vector<double> theta(static_cast<std::size_t>(n_parameters));
  for (std::size_t b = 0; b < n_corners; ++b) {
    for (int j = 0; j < n_parameters; ++j) theta[static_cast<std::size_t>(j)] = static_cast<double>((b >> (n_parameters - 1 - j)) & 1U);
    corners.push_back(simulator(theta));
  }
  const int n_outcomes = static_cast<int>(corners.front().size());
  ForwardMap map(n_parameters, n_outcomes, std::move(corners));

  Rng rng = make_rng(probe_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int probe = 0; probe < n_probes; ++probe) {
    for (auto& t : theta) t = unit(rng);
    const auto expected = simulator(theta);
    const auto fitted = map.evaluate(theta);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (std::abs(expected[i] - fitted[i]) > 1e-8) {
        throw ModelMismatch("outcome law is not multilinear in the noise parameters (residual " +
                            std::to_string(std::abs(expected[i] - fitted[i])) + ")");
      }
    }
  }
  return map;
}

namespace {

std::vector<int> correlated_qubits_of(const CircuitSpec& circuit) {
  if (circuit.n_cnots() == 0) return {};
  std::vector<int> qs;
  for (const auto& [c, t] : circuit.cnot_pairs) {
    qs.push_back(c);
    qs.push_back(t);
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  return qs;
}

}  // namespace

BlockSimulator correlated_block_simulator(const CircuitSpec& circuit) {
  const auto qubits = correlated_qubits_of(circuit);
  if (qubits.empty()) throw InvalidInput("circuit has no CNOT-coupled qubits");
  return [circuit, qubits](std::span<const double> theta) {
    if (theta.size() != qubits.size() + 2) throw InvalidInput("theta has wrong dimension");
    NoiseParams p = NoiseParams::noiseless(circuit.n_qubits);
    for (std::size_t j = 0; j < qubits.size(); ++j) p.spam_fidelity[static_cast<std::size_t>(qubits[j])] = theta[j];
    p.depol_control = theta[qubits.size()];
    p.depol_target = theta[qubits.size() + 1];
    const auto full = exact_noisy_distribution(decorate(circuit, 0), p);
    return marginal_distribution(full, qubits);
  };
}

// ---------------------------------------------------------------------------
// Grid inversion

std::size_t AxisSpec::size() const {
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

double AxisSpec::value(std::size_t i) const { return std::min(max, min + static_cast<double>(i) * step); }

void GridSpec::validate() const {
  for (const auto* a : {&fidelity, &depol}) {
    if (!(a->step > 0.0)) throw InvalidInput("grid spacing must be positive");
    if (!(a->max >= a->min)) throw InvalidInput("grid bounds are empty");
  }
  if (fidelity.min < 0.0 || fidelity.max > 1.0 || depol.min < 0.0 || depol.max > 1.0) {
    throw InvalidInput("grid bounds leave the legal parameter range");
  }
  if (refinement_levels < 0) throw InvalidInput("refinement levels must be nonnegative");
}

namespace {

struct Best {
  double mse = std::numeric_limits<double>::infinity();
  std::uint64_t flat = std::numeric_limits<std::uint64_t>::max();
};

/// Depth-first multilinear contraction: level l holds 2^(P-l) * M partial values.
class GridScanner {
 public:
  GridScanner(std::span<const double> targets, const ForwardMap& map, const Axes& axes)
      : targets_(targets), axes_(axes), p_(map.n_parameters()), m_(map.n_outcomes()) {
    strides_.assign(static_cast<std::size_t>(p_), 1);
    for (int l = p_ - 2; l >= 0; --l) {
      strides_[static_cast<std::size_t>(l)] = strides_[static_cast<std::size_t>(l + 1)] * axes_[static_cast<std::size_t>(l + 1)].size();
    }
    levels_.resize(static_cast<std::size_t>(p_ + 1));
    for (int l = 0; l <= p_; ++l) levels_[static_cast<std::size_t>(l)].resize((std::size_t{1} << (p_ - l)) * static_cast<std::size_t>(m_));
    auto& top = levels_[0];
    const auto& corners = map.corner_values();
    for (std::size_t b = 0; b < corners.size(); ++b) {
      for (int i = 0; i < m_; ++i) top[b * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] = corners[b][static_cast<std::size_t>(i)];
    }
  }

  /// Scans first-axis indices [begin, end) in ascending order.
  Best scan(std::size_t begin, std::size_t end) {
    Best best;
    for (std::size_t i = begin; i < end; ++i) {
      contract(0, axes_[0][i]);
      descend(1, i * strides_[0], best);
    }
    return best;
  }

 private:
  void contract(int level, double t) {
    const auto& in = levels_[static_cast<std::size_t>(level)];
    auto& out = levels_[static_cast<std::size_t>(level + 1)];
    const std::size_t half = out.size();
    for (std::size_t j = 0; j < half; ++j) out[j] = (1.0 - t) * in[j] + t * in[half + j];
  }

  void descend(int level, std::uint64_t flat, Best& best) {
    if (level == p_) {
      const auto& probs = levels_[static_cast<std::size_t>(p_)];
      double mse = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double d = probs[static_cast<std::size_t>(i)] - targets_[static_cast<std::size_t>(i)];
        mse += d * d;
      }
      if (mse < best.mse) best = {mse, flat};
      return;
    }
    const auto& axis = axes_[static_cast<std::size_t>(level)];
    for (std::size_t i = 0; i < axis.size(); ++i) {
      contract(level, axis[i]);
      descend(level + 1, flat + i * strides_[static_cast<std::size_t>(level)], best);
    }
  }

  std::span<const double> targets_;
  const Axes& axes_;
  int p_;
  int m_;
  std::vector<std::uint64_t> strides_;
  std::vector<std::vector<double>> levels_;
};

void check_scan_inputs(std::span<const double> targets, const ForwardMap& map, const Axes& axes) {
  if (axes.size() != static_cast<std::size_t>(map.n_parameters())) throw InvalidInput("one axis per parameter required");
  for (const auto& a : axes) {
    if (a.empty()) throw InvalidInput("empty grid axis");
  }
  if (targets.size() != static_cast<std::size_t>(map.n_outcomes())) throw InvalidInput("target length mismatch");
}

InversionResult unflatten(const Best& best, const Axes& axes) {
  InversionResult r;
  r.mse = best.mse;
  r.theta.resize(axes.size());
  std::uint64_t flat = best.flat;
  for (std::size_t l = axes.size(); l-- > 0;) {
    r.theta[l] = axes[l][flat % axes[l].size()];
    flat /= axes[l].size();
  }
  return r;
}

std::vector<double> axis_values(const AxisSpec& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.value(i);
  return v;
}

std::vector<double> refine_axis(double center, double step, const AxisSpec& bounds) {
  std::vector<double> v;
  const double fine = step / 10.0;
  for (int j = -10; j <= 10; ++j) {
    const double x = center + j * fine;
    if (x < bounds.min - 1e-12 || x > bounds.max + 1e-12) continue;
    v.push_back(std::clamp(x, bounds.min, bounds.max));
  }
  return v;
}

}  // namespace

InversionResult grid_argmin_serial(std::span<const double> targets, const ForwardMap& map, const Axes& axes) {
  check_scan_inputs(targets, map, axes);
  GridScanner scanner(targets, map, axes);
  return unflatten(scanner.scan(0, axes[0].size()), axes);
}

InversionResult grid_argmin(std::span<const double> targets, const ForwardMap& map, const Axes& axes) {
  check_scan_inputs(targets, map, axes);
  const std::size_t n0 = axes[0].size();
  std::vector<Best> partial(n0);

#pragma omp parallel
  {
    GridScanner scanner(targets, map, axes);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n0); ++i) {
      partial[static_cast<std::size_t>(i)] = scanner.scan(static_cast<std::size_t>(i), static_cast<std::size_t>(i) + 1);
    }
  }

  // Ascending first-axis order with strict comparison keeps the lexicographically smallest tie.
  Best best;
  for (const auto& b : partial) {
    if (b.mse < best.mse) best = b;
  }
  return unflatten(best, axes);
}

InversionResult invert_forward_map(std::span<const double> targets, const ForwardMap& map, const GridSpec& grid) {
  grid.validate();
  const double total = std::accumulate(targets.begin(), targets.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-6) throw InvalidInput("inversion targets must lie on the simplex");
  for (double t : targets) {
    if (t < -1e-6) throw InvalidInput("inversion targets must lie on the simplex");
  }
  const int p = map.n_parameters();
  if (p < 2) throw InvalidInput("forward map needs the two depolarizing parameters");

  std::vector<const AxisSpec*> bounds;
  Axes axes;
  for (int j = 0; j < p; ++j) {
    const AxisSpec& a = j < p - 2 ? grid.fidelity : grid.depol;
    bounds.push_back(&a);
    axes.push_back(axis_values(a));
  }
  InversionResult best = grid_argmin(targets, map, axes);

  std::vector<double> steps;
  for (const auto* b : bounds) steps.push_back(b->step);
  for (int level = 0; level < grid.refinement_levels; ++level) {
    Axes fine;
    for (int j = 0; j < p; ++j) {
      fine.push_back(refine_axis(best.theta[static_cast<std::size_t>(j)], steps[static_cast<std::size_t>(j)], *bounds[static_cast<std::size_t>(j)]));
      steps[static_cast<std::size_t>(j)] /= 10.0;
    }
    InversionResult r = grid_argmin(targets, map, fine);
    if (r.mse < best.mse) best = std::move(r);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Adaptive estimation

EstimatorState make_estimator(const CircuitSpec& circuit, const PriorConfig& prior, const GridSpec& grid) {
  grid.validate();
  const int n = circuit.n_qubits;
  if (prior.spam_mean.size() != static_cast<std::size_t>(n) || prior.spam_variance.size() != static_cast<std::size_t>(n)) {
    throw InvalidInput("prior needs one SPAM mean and variance per qubit");
  }
  if (!(prior.dirichlet_pseudo_count > 0.0)) throw InvalidInput("Dirichlet pseudo-count must be positive");

  EstimatorState s;
  s.circuit = circuit;
  s.grid = grid;
  s.correlated_qubits = correlated_qubits_of(circuit);
  const std::uint64_t ideal = ideal_outcome(circuit);
  for (int q = 0; q < n; ++q) {
    s.ideal_bits.push_back(qubit_bit(ideal, q, n));
    if (std::find(s.correlated_qubits.begin(), s.correlated_qubits.end(), q) == s.correlated_qubits.end()) {
      s.uncorrelated_qubits.push_back(q);
      s.beta.push_back(beta_from_mean_var(prior.spam_mean[static_cast<std::size_t>(q)], prior.spam_variance[static_cast<std::size_t>(q)]));
    }
  }
  s.estimate.spam_fidelity = prior.spam_mean;
  s.estimate.depol_control = prior.depol_control_mean;
  s.estimate.depol_target = prior.depol_target_mean;

  if (!s.correlated_qubits.empty()) {
    const int n_params = static_cast<int>(s.correlated_qubits.size()) + 2;
    s.forward_map = std::make_shared<const ForwardMap>(fit_forward_map(n_params, correlated_block_simulator(circuit)));
    std::vector<double> theta;
    for (int q : s.correlated_qubits) theta.push_back(prior.spam_mean[static_cast<std::size_t>(q)]);
    theta.push_back(prior.depol_control_mean);
    theta.push_back(prior.depol_target_mean);
    const auto p0 = s.forward_map->evaluate(theta);
    // Cells the prior law gives zero mass keep a small positive weight.
    const double floor = 1e-6 * prior.dirichlet_pseudo_count;
    for (double v : p0) s.dirichlet.a.push_back(std::max(prior.dirichlet_pseudo_count * v, floor));
  }
  return s;
}

AdaptiveUpdate adaptive_update(const EstimatorState& state, const CountsTable& counts) {
  const int n = state.circuit.n_qubits;
  if (counts.n_qubits() != n) throw InvalidInput("counts table does not match the circuit width");

  AdaptiveUpdate out{state, state.estimate, {}};
  EstimatorState& s = out.state;
  const auto dense = counts.dense();
  const std::uint64_t shots = counts.total_shots();

  for (std::size_t j = 0; j < s.uncorrelated_qubits.size(); ++j) {
    const int q = s.uncorrelated_qubits[j];
    std::uint64_t successes = 0;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (qubit_bit(i, q, n) == s.ideal_bits[static_cast<std::size_t>(q)]) successes += dense[i];
    }
    s.beta[j] = beta_update(s.beta[j], successes, shots);
    s.estimate.spam_fidelity[static_cast<std::size_t>(q)] = s.beta[j].mean();
  }

  if (!s.correlated_qubits.empty()) {
    const CountsTable block = counts.marginal(s.correlated_qubits);
    s.dirichlet = dirichlet_update(s.dirichlet, block.dense());
    std::vector<double> targets;
    for (std::size_t i = 0; i < s.dirichlet.a.size(); ++i) targets.push_back(dirichlet_marginal_moments(s.dirichlet, i).mean);
    const InversionResult r = invert_forward_map(targets, *s.forward_map, s.grid);
    for (std::size_t j = 0; j < s.correlated_qubits.size(); ++j) {
      s.estimate.spam_fidelity[static_cast<std::size_t>(s.correlated_qubits[j])] = r.theta[j];
    }
    s.estimate.depol_control = r.theta[s.correlated_qubits.size()];
    s.estimate.depol_target = r.theta[s.correlated_qubits.size() + 1];
    s.last_mse = r.mse;
  }

  out.params = s.estimate;
  out.qpd = composite_qpd(s.estimate, s.circuit, std::max(kDefaultXMax, s.grid.depol.max));
  return out;
}

}  // namespace pecsim
