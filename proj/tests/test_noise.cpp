#include "pecsim/errors.hpp"
#include "pecsim/noise.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace pecsim;

namespace {

DriftSpec reference_drift() {
  DriftSpec d;
  for (double f : {0.96, 0.95, 0.94, 0.93, 0.92}) d.spam.push_back({f, -0.01, 1e-4});
  d.depol_control = {0.017, 0.01, 1e-5};
  d.depol_target = {0.017, 0.01, 1e-5};
  return d;
}

double outcome_one(double f, int basis) {
  const auto rho = apply_kraus(DensityMatrix::basis_state(1, static_cast<std::uint64_t>(basis)), spam_channel(f));
  return computational_distribution(rho)[1];
}

}  // namespace

TEST_CASE("spam_channel") {
  CHECK(outcome_one(1.0, 0) == 0.0);
  CHECK(outcome_one(1.0, 1) == 1.0);
  CHECK(outcome_one(0.5, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(outcome_one(0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(outcome_one(0.92, 1) == doctest::Approx(0.92).epsilon(1e-15));

  // Outcome-0 probability on diag(a, 1-a) is f a + (1-f)(1-a).
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = 0.7;
  const auto p = computational_distribution(apply_kraus(DensityMatrix::from_matrix(d), spam_channel(0.8)));
  CHECK(p[0] == doctest::Approx(0.8 * 0.3 + 0.2 * 0.7).epsilon(1e-15));

  for (double f : {0.0, 0.37, 0.5, 0.9, 1.0}) {
    const auto ch = spam_channel(f);
    Matrix sum = Matrix::Zero(2, 2);
    for (const auto& m : ch.operators()) sum += m.adjoint() * m;
    CHECK((sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  }
  CHECK_THROWS_AS(spam_channel(1.1), InvalidInput);
  CHECK_THROWS_AS(spam_channel(-0.1), InvalidInput);
}

TEST_CASE("cnot_depol_weights") {
  auto w = cnot_depol_weights(0.0, 0.0);
  CHECK(w[0] == 1.0);
  CHECK(std::accumulate(w.begin() + 1, w.end(), 0.0) == 0.0);

  w = cnot_depol_weights(0.3, 0.0);
  CHECK(w[0] == doctest::Approx(0.7).epsilon(1e-15));
  for (int a = 1; a < 4; ++a) CHECK(w[static_cast<std::size_t>(4 * a)] == doctest::Approx(0.1).epsilon(1e-15));
  for (int b = 1; b < 4; ++b) CHECK(w[static_cast<std::size_t>(b)] == 0.0);

  for (double xc = 0.0; xc <= 1.0; xc += 0.125) {
    for (double xt = 0.0; xt <= 1.0; xt += 0.125) {
      w = cnot_depol_weights(xc, xt);
      double s = 0.0;
      for (double v : w) {
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(std::abs(s - 1.0) <= 1e-15);
    }
  }
  CHECK_THROWS_AS(cnot_depol_weights(1.2, 0.0), InvalidInput);
  CHECK_THROWS_AS(cnot_depol_channel(0.0, -0.1), InvalidInput);
}

TEST_CASE("cnot_depol_channel at zero noise is the identity") {
  const auto rho = DensityMatrix::maximally_mixed(2);
  auto psi = apply_unitary(DensityMatrix::basis_state(2, 1), hadamard(0));
  const auto out = apply_kraus(psi, cnot_depol_channel(0.0, 0.0));
  CHECK((out.matrix() - psi.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  (void)rho;
}

TEST_CASE("noise params validation") {
  NoiseParams p{{0.9, 0.5}, 0.01, 0.01};
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  p.spam_fidelity[1] = 0.51;
  CHECK_NOTHROW(p.validate());
  p.depol_control = 0.4;
  CHECK_THROWS_AS(p.validate(), InvalidInput);
  CHECK_NOTHROW(p.validate(1.0));
}

TEST_CASE("drift_mean") {
  const auto d = reference_drift();
  CHECK(drift_mean(d, DriftParameter::spam(0), 10) == doctest::Approx(0.86).epsilon(1e-14));
  CHECK(drift_mean(d, DriftParameter::spam(4), 10) == doctest::Approx(0.82).epsilon(1e-14));
  CHECK(drift_mean(d, DriftParameter::depol_control(), 10) == doctest::Approx(0.117).epsilon(1e-14));
  CHECK(drift_mean(d, DriftParameter::depol_target(), 0) == 0.017);
  CHECK_THROWS_AS(drift_mean(d, DriftParameter::spam(0), 11), InvalidInput);

  DriftSpec bad = d;
  bad.spam[0].per_period_delta = -0.05;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(drift_mean(bad, DriftParameter::spam(0), 10), InvalidInput);
}

TEST_CASE("sample_period_params") {
  auto d = reference_drift();
  SUBCASE("zero variance gives the means") {
    for (auto& e : d.spam) e.variance = 0.0;
    d.depol_control.variance = 0.0;
    d.depol_target.variance = 0.0;
    auto rng = make_rng(5);
    const auto p = sample_period_params(d, 3, rng);
    CHECK(p.spam_fidelity[0] == drift_mean(d, DriftParameter::spam(0), 3));
    CHECK(p.depol_target == drift_mean(d, DriftParameter::depol_target(), 3));
  }
  SUBCASE("sample mean near 0.95") {
    DriftSpec s;
    s.spam.push_back({0.95, 0.0, 1e-4});
    s.depol_control = {0.02, 0.0, 1e-5};
    s.depol_target = {0.02, 0.0, 1e-5};
    auto rng = make_rng(6);
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += sample_period_params(s, 1, rng).spam_fidelity[0];
    CHECK(std::abs(sum / 10000 - 0.95) < 0.003);
  }
  SUBCASE("empirical means within 4 standard errors at every period") {
    const int n = 100000;
    for (int t : {0, 5, 10}) {
      auto rng = make_rng(40, static_cast<std::uint64_t>(t));
      double f0 = 0.0;
      double xc = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto p = sample_period_params(d, t, rng);
        f0 += p.spam_fidelity[0];
        xc += p.depol_control;
      }
      CHECK(std::abs(f0 / n - drift_mean(d, DriftParameter::spam(0), t)) < 4.0 * std::sqrt(1e-4 / n));
      CHECK(std::abs(xc / n - drift_mean(d, DriftParameter::depol_control(), t)) < 4.0 * std::sqrt(1e-5 / n));
    }
  }
  SUBCASE("unrepresentable variance is rejected") {
    d.spam[0].variance = 0.5;
    auto rng = make_rng(1);
    CHECK_THROWS(sample_period_params(d, 1, rng));
  }
}

TEST_CASE("trajectories are reproducible per seed") {
  const auto d = reference_drift();
  const auto a = generate_trajectory(d, 12);
  const auto b = generate_trajectory(d, 12);
  const auto c = generate_trajectory(d, 13);
  REQUIRE(a.periods.size() == 10);
  CHECK(a.periods == b.periods);
  CHECK_FALSE(a.periods == c.periods);
  for (const auto& p : a.periods) CHECK_NOTHROW(p.validate());
  // Period t depends only on (seed, t).
  auto rng = make_rng(12, 4);
  CHECK(sample_period_params(d, 4, rng) == a.periods[3]);
}
