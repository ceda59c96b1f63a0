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

#include "pecsim/noise.hpp"

#include "pecsim/bayes.hpp"
#include "pecsim/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

namespace pecsim {

namespace {

constexpr char kPauliLabels[4] = {'I', 'X', 'Y', 'Z'};

// Fidelities are kept strictly above 1/2 after sampling.
constexpr double kMinFidelity = 0.5 + 1e-6;

const DriftEntry& entry_for(const DriftSpec& spec, DriftParameter p) {
  switch (p.kind) {
    case DriftParameter::Kind::kSpam:
      if (p.qubit < 0 || static_cast<std::size_t>(p.qubit) >= spec.spam.size()) {
        throw InvalidInput("no drift entry for qubit " + std::to_string(p.qubit));
      }
      return spec.spam[static_cast<std::size_t>(p.qubit)];
    case DriftParameter::Kind::kDepolControl:
      return spec.depol_control;
    case DriftParameter::Kind::kDepolTarget:
      return spec.depol_target;
  }
  throw InvalidInput("unknown drift parameter");
}

bool in_legal_range(const DriftSpec& spec, DriftParameter p, double v) {
  if (p.kind == DriftParameter::Kind::kSpam) return v > 0.5 && v <= 1.0;
  return v >= 0.0 && v <= spec.x_max;
}

double draw(const DriftSpec& spec, DriftParameter p, int t, Rng& rng) {
  const double mu = drift_mean(spec, p, t);
  const double var = entry_for(spec, p).variance;
  double v = mu;
  if (var > 0.0) {
    const BetaPosterior law = beta_from_mean_var(mu, var);
    std::gamma_distribution<double> ga(law.alpha, 1.0);
    std::gamma_distribution<double> gb(law.beta, 1.0);
    const double a = ga(rng);
    const double b = gb(rng);
    v = a / (a + b);
  }
  if (p.kind == DriftParameter::Kind::kSpam) return std::clamp(v, kMinFidelity, 1.0);
  return std::clamp(v, 0.0, spec.x_max);
}

}  // namespace

void NoiseParams::validate(double x_max) const {
  if (spam_fidelity.empty()) throw InvalidInput("noise parameters need at least one qubit");
  for (std::size_t q = 0; q < spam_fidelity.size(); ++q) {
    const double f = spam_fidelity[q];
    if (!(f > 0.5 && f <= 1.0)) {
      throw InvalidInput("SPAM fidelity of qubit " + std::to_string(q) + " must lie in (0.5, 1]");
    }
  }
  if (!(depol_control >= 0.0 && depol_control <= x_max) || !(depol_target >= 0.0 && depol_target <= x_max)) {
    throw InvalidInput("depolarizing parameters must lie in [0, x_max]");
  }
}

void DriftSpec::validate() const {
  if (n_periods < 0) throw InvalidInput("n_periods must be nonnegative");
  if (!(x_max > 0.0 && x_max <= 1.0)) throw InvalidInput("x_max must lie in (0, 1]");
  std::vector<DriftParameter> params;
  for (std::size_t q = 0; q < spam.size(); ++q) params.push_back(DriftParameter::spam(static_cast<int>(q)));
  params.push_back(DriftParameter::depol_control());
  params.push_back(DriftParameter::depol_target());
  for (const auto& p : params) {
    const double var = entry_for(*this, p).variance;
    if (var < 0.0) throw InvalidInput("drift variance must be nonnegative");
    for (int t = 0; t <= n_periods; ++t) {
      const double mu = drift_mean(*this, p, t);
      if (var > 0.0 && !(var < mu * (1.0 - mu))) {
        throw UnrepresentableMoments("drift variance exceeds mu(1 - mu) at period " + std::to_string(t));
      }
    }
  }
}

KrausChannel spam_channel(double f, int target) {
  if (!(f >= 0.0 && f <= 1.0)) throw InvalidInput("SPAM fidelity must lie in [0, 1]");
  const double a = std::sqrt(f);
  const double b = std::sqrt(1.0 - f);
  // Bit flip with probability 1 - f; its outcome statistics are Tr[M_i^dag M_i rho].
  Matrix keep = a * Matrix::Identity(2, 2);
  Matrix flip = Matrix::Zero(2, 2);
  flip(0, 1) = b;
  flip(1, 0) = b;
  return KrausChannel({std::move(keep), std::move(flip)}, {target});
}

std::array<double, 16> cnot_depol_weights(double xc, double xt) {
  if (!(xc >= 0.0 && xc <= 1.0) || !(xt >= 0.0 && xt <= 1.0)) {
    throw InvalidInput("depolarizing parameters must lie in [0, 1]");
  }
  // Product of two single-qubit depolarizing laws.
  const std::array<double, 4> wc{1.0 - xc, xc / 3.0, xc / 3.0, xc / 3.0};
  const std::array<double, 4> wt{1.0 - xt, xt / 3.0, xt / 3.0, xt / 3.0};
  std::array<double, 16> w{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) w[static_cast<std::size_t>(4 * a + b)] = wc[static_cast<std::size_t>(a)] * wt[static_cast<std::size_t>(b)];
  }
  return w;
}

KrausChannel cnot_depol_channel(double xc, double xt, int control, int target) {
  const auto w = cnot_depol_weights(xc, xt);
  std::vector<Matrix> ops;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double weight = w[static_cast<std::size_t>(4 * a + b)];
      if (weight == 0.0) continue;
      Matrix p = Eigen::kroneckerProduct(pauli_matrix(kPauliLabels[a]), pauli_matrix(kPauliLabels[b]));
      ops.push_back(std::sqrt(weight) * p);
    }
  }
  return KrausChannel(std::move(ops), {control, target});
}

double drift_mean(const DriftSpec& spec, DriftParameter p, int t) {
  if (t < 0 || t > spec.n_periods) throw InvalidInput("period index out of range");
  const auto& e = entry_for(spec, p);
  const double mu = e.initial_mean + static_cast<double>(t) * e.per_period_delta;
  if (!in_legal_range(spec, p, mu)) {
    throw InvalidInput("drifted mean " + std::to_string(mu) + " leaves the legal range at period " +
                       std::to_string(t));
  }
  return mu;
}

NoiseParams mean_params(const DriftSpec& spec, int t) {
  NoiseParams out;
  for (std::size_t q = 0; q < spec.spam.size(); ++q) {
    out.spam_fidelity.push_back(drift_mean(spec, DriftParameter::spam(static_cast<int>(q)), t));
  }
  out.depol_control = drift_mean(spec, DriftParameter::depol_control(), t);
  out.depol_target = drift_mean(spec, DriftParameter::depol_target(), t);
  return out;
}

NoiseParams sample_period_params(const DriftSpec& spec, int t, Rng& rng) {
  NoiseParams out;
  for (std::size_t q = 0; q < spec.spam.size(); ++q) {
    out.spam_fidelity.push_back(draw(spec, DriftParameter::spam(static_cast<int>(q)), t, rng));
  }
  out.depol_control = draw(spec, DriftParameter::depol_control(), t, rng);
  out.depol_target = draw(spec, DriftParameter::depol_target(), t, rng);
  return out;
}

NoiseTrajectory generate_trajectory(const DriftSpec& spec, std::uint64_t seed) {
  spec.validate();
  NoiseTrajectory traj{seed, {}};
  for (int t = 1; t <= spec.n_periods; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    traj.periods.push_back(sample_period_params(spec, t, rng));
  }
  return traj;
}

}  // namespace pecsim
