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

#include "pecsim/pec.hpp"

#include "pecsim/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numeric>
#include <string>

namespace pecsim {

namespace {

constexpr double kSpamSingular = 1e-6;
constexpr double kRcondThreshold = 1e-12;
constexpr double kSolveResidual = 1e-10;

using Ptm = Eigen::Matrix<double, 16, 16>;

const std::array<Eigen::Matrix4cd, 16>& two_qubit_paulis() {
  static const std::array<Eigen::Matrix4cd, 16> table = [] {
    std::array<Eigen::Matrix4cd, 16> t;
    const char labels[4] = {'I', 'X', 'Y', 'Z'};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        t[static_cast<std::size_t>(4 * a + b)] = Eigen::kroneckerProduct(pauli_matrix(labels[a]), pauli_matrix(labels[b]));
      }
    }
    return t;
  }();
  return table;
}

Ptm unitary_ptm(const Eigen::Matrix4cd& u) {
  const Matrix op = u;
  return pauli_transfer_matrix(std::span<const Matrix>(&op, 1));
}

}  // namespace

QuasiProbabilityDistribution::QuasiProbabilityDistribution(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty()) throw InvalidInput("empty quasi-probability distribution");
  double sum = 0.0;
  gamma_ = 0.0;
  for (double e : eta_) {
    sum += e;
    gamma_ += std::abs(e);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InvalidInput("quasi-probabilities must sum to 1");
  weights_.resize(eta_.size());
  for (std::size_t k = 0; k < eta_.size(); ++k) weights_[k] = std::abs(eta_[k]) / gamma_;
}

int QuasiProbabilityDistribution::sign(std::size_t k) const {
  const double e = eta_.at(k);
  return (e > 0.0) - (e < 0.0);
}

SpamPec spam_coeffs(double f) {
  if (!(f > 0.5 + kSpamSingular) || f > 1.0) {
    throw SingularParameter("SPAM fidelity " + std::to_string(f) + " makes the inverse singular or invalid");
  }
  const double d = 2.0 * f - 1.0;
  SpamPec s;
  s.eta0 = f / d;
  s.eta1 = -(1.0 - f) / d;
  s.gamma = std::abs(s.eta0) + std::abs(s.eta1);
  return s;
}

Ptm pauli_transfer_matrix(std::span<const Matrix> kraus_ops) {
  const auto& paulis = two_qubit_paulis();
  Ptm t;
  for (int j = 0; j < 16; ++j) {
    Eigen::Matrix4cd image = Eigen::Matrix4cd::Zero();
    for (const auto& m : kraus_ops) image += m * paulis[static_cast<std::size_t>(j)] * m.adjoint();
    for (int i = 0; i < 16; ++i) {
      t(i, j) = (paulis[static_cast<std::size_t>(i)] * image).trace().real() / 4.0;
    }
  }
  return t;
}

CnotPec cnot_coeffs_numeric(double xc, double xt) {
  const auto& paulis = two_qubit_paulis();
  const Ptm t_cnot = unitary_ptm(cnot(0, 1).matrix);
  const KrausChannel depol = cnot_depol_channel(xc, xt);
  const Ptm t_noisy = pauli_transfer_matrix(depol.operators()) * t_cnot;

  // Column k: vec(T(P_k) T(D) T(CNOT)).
  Eigen::MatrixXd a(256, 16);
  for (int k = 0; k < 16; ++k) {
    const Ptm tk = unitary_ptm(paulis[static_cast<std::size_t>(k)]) * t_noisy;
    a.col(k) = Eigen::Map<const Eigen::VectorXd>(tk.data(), 256);
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(t_cnot.data(), 256);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(15) / sv(0) < kRcondThreshold) {
    throw SingularParameter("depolarizing parameters make the CNOT inverse singular");
  }
  const Eigen::VectorXd eta = a.colPivHouseholderQr().solve(b);
  if ((a * eta - b).cwiseAbs().maxCoeff() > kSolveResidual) {
    throw SingularParameter("CNOT coefficient system has no exact solution");
  }

  CnotPec out;
  out.gamma = 0.0;
  for (int k = 0; k < 16; ++k) {
    out.eta[static_cast<std::size_t>(k)] = eta(k);
    out.gamma += std::abs(eta(k));
  }
  return out;
}

CnotPec cnot_coeffs_closed_form(double xc, double xt) {
  const double c1 = xc + xt - xc * xt - 1.0;
  const double u = xt * (1.0 - xc);
  const double v = xc * (1.0 - xt);
  const double denom = u * u + v * v - 3.0 * c1 * c1;
  if (std::abs(denom) < 1e-300) throw SingularParameter("closed-form CNOT coefficients diverge");
  const double c0 = 3.0 / denom;

  CnotPec out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double e = 0.0;
      if (a == 0 && b == 0) {
        e = c0 * c1;
      } else if (a == 0) {
        e = c0 * u / 3.0;
      } else if (b == 0) {
        e = c0 * v / 3.0;
      } else {
        e = c0 * xc * xt / 9.0;
      }
      out.eta[static_cast<std::size_t>(4 * a + b)] = e;
    }
  }
  out.gamma = 0.0;
  for (double e : out.eta) out.gamma += std::abs(e);
  return out;
}

QuasiProbabilityDistribution composite_qpd(const NoiseParams& params, const CircuitSpec& circuit, double x_max) {
  params.validate(x_max);
  if (params.n_qubits() != circuit.n_qubits) throw InvalidInput("noise parameters do not match the circuit");
  const int n = circuit.n_qubits;
  const int m = circuit.n_cnots();

  std::vector<SpamPec> spam;
  for (double f : params.spam_fidelity) spam.push_back(spam_coeffs(f));

  // Per-CNOT factor over all 16^m Pauli tuples, then per-qubit SPAM factor over 2^n masks.
  std::vector<double> cnot_part{1.0};
  if (m > 0) {
    const CnotPec cp = cnot_coeffs_numeric(params.depol_control, params.depol_target);
    for (int j = 0; j < m; ++j) {
      std::vector<double> next;
      next.reserve(cnot_part.size() * 16);
      for (double prefix : cnot_part) {
        for (double e : cp.eta) next.push_back(prefix * e);
      }
      cnot_part = std::move(next);
    }
  }
  std::vector<double> eta;
  eta.reserve(basis_circuit_count(circuit));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double s = 1.0;
    for (int q = 0; q < n; ++q) {
      const auto& sp = spam[static_cast<std::size_t>(q)];
      s *= ((mask >> q) & 1U) ? sp.eta1 : sp.eta0;
    }
    for (double c : cnot_part) eta.push_back(s * c);
  }
  return QuasiProbabilityDistribution(std::move(eta));
}

ExpectationTable expectations_from_distributions(const std::vector<std::vector<double>>& distributions) {
  ExpectationTable out;
  out.reserve(distributions.size());
  for (const auto& p : distributions) {
    int n = 0;
    while ((std::size_t{1} << n) < p.size()) ++n;
    std::vector<double> e(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) e[static_cast<std::size_t>(q)] = qubit_expectation(p, q);
    out.push_back(std::move(e));
  }
  return out;
}

ExpectationTable expectations_from_counts(const std::vector<CountsTable>& counts) {
  ExpectationTable out;
  out.reserve(counts.size());
  for (const auto& c : counts) {
    std::vector<double> e(static_cast<std::size_t>(c.n_qubits()));
    for (int q = 0; q < c.n_qubits(); ++q) e[static_cast<std::size_t>(q)] = qubit_expectation(c, q);
    out.push_back(std::move(e));
  }
  return out;
}

PecEstimate full_sum_estimate(const ExpectationTable& expectations, const QuasiProbabilityDistribution& qpd) {
  if (expectations.size() != qpd.size()) {
    throw InvalidInput("expectation table has " + std::to_string(expectations.size()) + " circuits, QPD has " +
                       std::to_string(qpd.size()));
  }
  const std::size_t n = expectations.front().size();
  PecEstimate out;
  out.mode = PecEstimate::Mode::kFullSum;
  out.values.assign(n, 0.0);
  for (std::size_t k = 0; k < expectations.size(); ++k) {
    if (expectations[k].size() != n) throw InvalidInput("ragged expectation table");
    const double e = qpd.eta()[k];
    for (std::size_t q = 0; q < n; ++q) out.values[q] += e * expectations[k][q];
  }
  return out;
}

PecEstimate monte_carlo_estimate(const QuasiProbabilityDistribution& qpd, const CircuitExecutor& executor,
                                 std::uint64_t n_samples, Rng& rng) {
  if (n_samples < 1) throw InvalidInput("Monte-Carlo estimate needs at least one sample");
  std::discrete_distribution<std::uint64_t> pick(qpd.weights().begin(), qpd.weights().end());
  std::vector<double> sum;
  std::vector<double> sum_sq;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const std::uint64_t k = pick(rng);
    const auto v = executor(k);
    if (sum.empty()) {
      sum.assign(v.size(), 0.0);
      sum_sq.assign(v.size(), 0.0);
    }
    if (v.size() != sum.size()) throw InvalidInput("executor returned a ragged result");
    const double scale = qpd.gamma() * static_cast<double>(qpd.sign(k));
    for (std::size_t q = 0; q < v.size(); ++q) {
      const double x = scale * v[q];
      sum[q] += x;
      sum_sq[q] += x * x;
    }
  }
  PecEstimate out;
  out.mode = PecEstimate::Mode::kMonteCarlo;
  out.n_samples = n_samples;
  const auto n = static_cast<double>(n_samples);
  for (std::size_t q = 0; q < sum.size(); ++q) {
    const double mean = sum[q] / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq[q] - n * mean * mean) / (n - 1.0)) : 0.0;
    out.values.push_back(mean);
    out.std_error.push_back(std::sqrt(var / n));
  }
  return out;
}

}  // namespace pecsim
