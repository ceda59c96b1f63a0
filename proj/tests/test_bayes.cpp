#include "oracle_values.hpp"
#include "pecsim/bayes.hpp"
#include "pecsim/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace pecsim;

namespace {

const CircuitSpec& bv1000() {
  static const CircuitSpec c = build_bv(SecretString("1000"));
  return c;
}

const ForwardMap& block_map() {
  static const ForwardMap m = fit_forward_map(4, correlated_block_simulator(bv1000()));
  return m;
}

/// Per-qubit readout contrast of the correlated pair; the law depends on theta only through these.
std::array<double, 2> contrasts(std::span<const double> theta) {
  return {(2 * theta[0] - 1) * (1 - 4 * theta[2] / 3), (2 * theta[1] - 1) * (1 - 4 * theta[3] / 3)};
}

PriorConfig weak_prior() {
  return {{0.5, 0.5, 0.5, 0.5, 0.5}, {1.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12}, 0.05, 0.05, 4.0};
}

}  // namespace

TEST_CASE("beta_from_mean_var") {
  auto b = beta_from_mean_var(0.5, 1.0 / 12.0);
  CHECK(b.alpha == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.beta == doctest::Approx(1.0).epsilon(1e-14));
  b = beta_from_mean_var(0.95, 0.001);
  CHECK(b.alpha == doctest::Approx(44.175).epsilon(1e-13));
  CHECK(b.beta == doctest::Approx(2.325).epsilon(1e-13));
  CHECK(std::abs(b.mean() - 0.95) < 1e-12);
  CHECK(std::abs(b.variance() - 0.001) < 1e-15);
  b = beta_from_mean_var(0.5, 0.05);
  CHECK(b.alpha == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b.beta == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(beta_from_mean_var(0.5, 0.25), UnrepresentableMoments);
  CHECK_THROWS_AS(beta_from_mean_var(0.5, 0.0), UnrepresentableMoments);
  CHECK_THROWS_AS(beta_from_mean_var(1.0, 0.01), UnrepresentableMoments);
}

TEST_CASE("beta_update") {
  const BetaPosterior prior{1.0, 1.0};
  CHECK(beta_update(prior, 0, 0) == prior);
  const auto b = beta_update(prior, 9, 10);
  CHECK(b.alpha == 10.0);
  CHECK(b.beta == 2.0);
  CHECK(b.mean() == 5.0 / 6.0);

  const auto c = beta_update({44.175, 2.325}, 9600, 10000);
  CHECK(c.alpha == 44.175 + 9600);
  CHECK(c.beta == 2.325 + 400);
  CHECK(c.mean() == doctest::Approx(0.95996).epsilon(1e-5));

  CHECK_THROWS_AS(beta_update(prior, 11, 10), InvalidInput);
}

TEST_CASE("beta posterior mean is a shrinkage combination") {
  const BetaPosterior prior{44.175, 2.325};
  const double n0 = prior.alpha + prior.beta;
  for (std::uint64_t s : {0ULL, 10ULL, 5000ULL, 9999ULL}) {
    const auto post = beta_update(prior, s, 10000);
    const double expect = (n0 * prior.mean() + 10000.0 * (static_cast<double>(s) / 10000.0)) / (n0 + 10000.0);
    CHECK(std::abs(post.mean() - expect) < 1e-12);
  }
}

TEST_CASE("dirichlet_update and marginals") {
  const DirichletPosterior flat{{1, 1, 1, 1}};
  const std::vector<std::uint64_t> zero{0, 0, 0, 0};
  CHECK(dirichlet_update(flat, zero) == flat);
  const std::vector<std::uint64_t> c{5, 2, 2, 1};
  const auto d = dirichlet_update(flat, c);
  CHECK(d.a == std::vector<double>{6, 3, 3, 2});

  const std::vector<std::uint64_t> c1{1, 2, 0, 1};
  const std::vector<std::uint64_t> c2{4, 0, 2, 0};
  CHECK(dirichlet_update(dirichlet_update(flat, c1), c2) == d);

  const auto m = dirichlet_marginal_moments(d, 0);
  CHECK(m.beta.alpha == 6.0);
  CHECK(m.beta.beta == 8.0);
  CHECK(std::abs(m.mean - 6.0 / 14.0) < 1e-12);
  CHECK(std::abs(m.variance - 48.0 / 2940.0) < 1e-12);
  double total = 0.0;
  for (std::size_t i = 0; i < 4; ++i) total += dirichlet_marginal_moments(d, i).mean;
  CHECK(std::abs(total - 1.0) < 1e-15);

  const std::vector<std::uint64_t> wrong{1, 2};
  CHECK_THROWS_AS(dirichlet_update(flat, wrong), InvalidInput);
  CHECK_THROWS_AS(dirichlet_marginal_moments(d, 4), InvalidInput);
}

TEST_CASE("forward map matches the simulator") {
  const auto& map = block_map();
  const auto sim = correlated_block_simulator(bv1000());
  const std::vector<double> noiseless{1.0, 1.0, 0.0, 0.0};
  const auto p = map.evaluate(noiseless);
  CHECK(p[2] == 1.0);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.0);
  CHECK(p[3] == 0.0);

  const std::vector<double> truth{0.93, 0.92, 0.017, 0.017};
  const auto at_truth = map.evaluate(truth);
  const auto direct = sim(truth);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(at_truth[i] - direct[i]) < 1e-10);
    CHECK(std::abs(at_truth[i] - oracle::kBlockLaw[i]) < 1e-13);
  }

  auto rng = make_rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> th{u(rng), u(rng), u(rng), u(rng)};
    const auto v = map.evaluate(th);
    CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("forward map is a probability law over the legal box") {
  const auto& map = block_map();
  for (double f3 = 0.5; f3 <= 1.0; f3 += 0.1) {
    for (double f4 = 0.5; f4 <= 1.0; f4 += 0.1) {
      for (double xc = 0.0; xc <= 1.0 / 3.0; xc += 1.0 / 12.0) {
        for (double xt = 0.0; xt <= 1.0 / 3.0; xt += 1.0 / 12.0) {
          const std::vector<double> th{f3, f4, xc, xt};
          for (double v : map.evaluate(th)) {
            CHECK(v >= -1e-10);
            CHECK(v <= 1.0 + 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("forward map is affine in each coordinate") {
  const auto& map = block_map();
  auto rng = make_rng(34);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> th{u(rng), u(rng), u(rng), u(rng)};
    for (std::size_t j = 0; j < 4; ++j) {
      const double h = 0.05;
      auto lo = th;
      auto hi = th;
      lo[j] -= h;
      hi[j] += h;
      const auto a = map.evaluate(lo);
      const auto b = map.evaluate(th);
      const auto c = map.evaluate(hi);
      for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs((c[i] - 2 * b[i] + a[i]) / (h * h)) < 1e-9);
    }
  }
}

TEST_CASE("monomial coefficients reproduce the map") {
  const auto& map = block_map();
  const auto coeffs = map.monomial_coefficients();
  REQUIRE(coeffs.size() == 16);
  const std::vector<double> th{0.91, 0.87, 0.03, 0.11};
  const auto v = map.evaluate(th);
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0.0;
    for (std::size_t set = 0; set < 16; ++set) {
      double term = coeffs[set][i];
      // Bit j of the subset index (most significant first) selects theta_j.
      for (std::size_t j = 0; j < 4; ++j) {
        if ((set >> (3 - j)) & 1U) term *= th[j];
      }
      s += term;
    }
    CHECK(std::abs(s - v[i]) < 1e-13);
  }
}

TEST_CASE("fit rejects a non-multilinear simulator") {
  const BlockSimulator curved = [](std::span<const double> th) {
    const double p = th[0] * th[0];
    return std::vector<double>{p, 1.0 - p};
  };
  CHECK_THROWS_AS(fit_forward_map(1, curved), ModelMismatch);
}

TEST_CASE("grid search agrees with the exhaustive oracle") {
  const Axes axes{{0.90, 0.91, 0.92, 0.93, 0.94}, {0.90, 0.91, 0.92, 0.93, 0.94}, {0.0, 0.01, 0.02, 0.03}, {0.0, 0.01, 0.02, 0.03}};
  const std::vector<double> targets(std::begin(oracle::kGridTargets), std::end(oracle::kGridTargets));
  const auto r = grid_argmin(targets, block_map(), axes);
  REQUIRE(oracle::kGridSecondMse - oracle::kGridBestMse > 1e-9);
  for (std::size_t j = 0; j < 4; ++j) CHECK(r.theta[j] == oracle::kGridBestTheta[j]);
  CHECK(r.mse == doctest::Approx(oracle::kGridBestMse).epsilon(1e-10));
}

TEST_CASE("parallel grid search equals the serial scan") {
  const auto& map = block_map();
  Axes axes;
  for (int j = 0; j < 2; ++j) {
    std::vector<double> a;
    for (int i = 0; i <= 25; ++i) a.push_back(0.75 + 0.01 * i);
    axes.push_back(a);
  }
  for (int j = 0; j < 2; ++j) {
    std::vector<double> a;
    for (int i = 0; i <= 20; ++i) a.push_back(0.005 * i);
    axes.push_back(a);
  }
  auto rng = make_rng(35);
  std::uniform_real_distribution<double> uf(0.8, 0.99);
  std::uniform_real_distribution<double> ux(0.0, 0.09);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> th{uf(rng), uf(rng), ux(rng), ux(rng)};
    const auto t = map.evaluate(th);
    const auto par = grid_argmin(t, map, axes);
    const auto ser = grid_argmin_serial(t, map, axes);
    CHECK(par.theta == ser.theta);
    CHECK(par.mse == ser.mse);
  }
}

TEST_CASE("inversion recovers an on-grid point of an identifiable map") {
  // Pr = (t0 (1 - t1), t1, (1 - t0)(1 - t1)) determines (t0, t1) uniquely.
  const ForwardMap map(2, 3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 0}});
  const std::vector<double> th{0.1, 0.2};
  const auto targets = map.evaluate(th);
  const auto r = invert_forward_map(targets, map, GridSpec{});
  CHECK(r.theta[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.theta[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.mse <= 1e-20);
}

TEST_CASE("inversion on the block map") {
  const auto& map = block_map();
  SUBCASE("noiseless fixed point") {
    const std::vector<double> targets{0, 0, 1, 0};
    const auto r = invert_forward_map(targets, map, GridSpec{});
    CHECK(r.theta == std::vector<double>{1.0, 1.0, 0.0, 0.0});
    CHECK(r.mse == 0.0);
  }
  SUBCASE("on-grid targets are fitted exactly") {
    const std::vector<double> th{0.93, 0.92, 0.015, 0.02};
    const auto r = invert_forward_map(map.evaluate(th), map, GridSpec{});
    CHECK(r.mse <= 1e-20);
    const auto got = contrasts(r.theta);
    const auto want = contrasts(th);
    CHECK(std::abs(got[0] - want[0]) < 1e-9);
    CHECK(std::abs(got[1] - want[1]) < 1e-9);
  }
  SUBCASE("off-grid truth: the readout contrasts are recovered") {
    // The law fixes only (2f - 1)(1 - 4x/3) per qubit; f and x separately are not identifiable.
    const std::vector<double> th{0.93, 0.92, 0.017, 0.017};
    const auto r = invert_forward_map(map.evaluate(th), map, GridSpec{});
    const auto got = contrasts(r.theta);
    const auto want = contrasts(th);
    CHECK(std::abs(got[0] - want[0]) < 2e-3);
    CHECK(std::abs(got[1] - want[1]) < 2e-3);
    GridSpec fine;
    fine.refinement_levels = 2;
    const auto rf = invert_forward_map(map.evaluate(th), map, fine);
    CHECK(rf.mse <= r.mse);
    const auto gf = contrasts(rf.theta);
    CHECK(std::abs(gf[0] - want[0]) < 2e-4);
    CHECK(std::abs(gf[1] - want[1]) < 2e-4);
  }
  SUBCASE("input checks") {
    const std::vector<double> off{0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(invert_forward_map(off, map, GridSpec{}), InvalidInput);
    GridSpec empty;
    empty.depol.step = 0.0;
    const std::vector<double> ok{0, 0, 1, 0};
    CHECK_THROWS_AS(invert_forward_map(ok, map, empty), InvalidInput);
  }
}

TEST_CASE("adaptive update with ideal counts keeps a noiseless estimate") {
  PriorConfig prior{{0.9999, 0.9999, 0.9999, 0.9999, 0.9999}, {1e-9, 1e-9, 1e-9, 1e-9, 1e-9}, 0.0, 0.0, 10.0};
  const auto state = make_estimator(bv1000(), prior, GridSpec{});
  CHECK(state.uncorrelated_qubits == std::vector<int>{0, 1, 2});
  CHECK(state.correlated_qubits == std::vector<int>{3, 4});
  const CountsTable counts(5, {{"00010", 10000}});
  const auto upd = adaptive_update(state, counts);
  for (double f : upd.params.spam_fidelity) CHECK(f > 0.9999);
  CHECK(upd.params.spam_fidelity[3] == 1.0);
  CHECK(upd.params.depol_control == 0.0);
  CHECK(upd.qpd.weights()[0] > 0.999);
}

TEST_CASE("adaptive update counts matches of the ideal bit") {
  const auto state = make_estimator(bv1000(), weak_prior(), GridSpec{});
  // Qubit 0 reads its ideal 0 in 90 of 100 shots.
  const CountsTable counts(5, {{"00010", 90}, {"10010", 10}});
  const auto upd = adaptive_update(state, counts);
  CHECK(upd.state.beta[0].alpha == doctest::Approx(1.0 + 90));
  CHECK(upd.state.beta[0].beta == doctest::Approx(1.0 + 10));
  CHECK(upd.params.spam_fidelity[0] == doctest::Approx(91.0 / 102.0));
  CHECK_THROWS_AS(adaptive_update(state, CountsTable(4)), InvalidInput);
}

TEST_CASE("posterior variance shrinks under stationary data") {
  const NoiseParams truth{{0.96, 0.95, 0.94, 0.93, 0.92}, 0.017, 0.017};
  const auto law = basis_distributions(bv1000(), truth)[0];
  auto state = make_estimator(bv1000(), weak_prior(), GridSpec{});
  std::vector<double> prev_beta;
  std::vector<double> prev_dir;
  for (int t = 0; t < 5; ++t) {
    auto rng = make_rng(90, static_cast<std::uint64_t>(t));
    auto upd = adaptive_update(state, sample_counts(law, 2000, rng));
    std::vector<double> vb;
    std::vector<double> vd;
    for (const auto& b : upd.state.beta) vb.push_back(b.variance());
    for (std::size_t i = 0; i < 4; ++i) vd.push_back(dirichlet_marginal_moments(upd.state.dirichlet, i).variance);
    if (t > 0) {
      for (std::size_t i = 0; i < vb.size(); ++i) CHECK(vb[i] < prev_beta[i]);
      for (std::size_t i = 0; i < vd.size(); ++i) CHECK(vd[i] < prev_dir[i]);
    }
    prev_beta = vb;
    prev_dir = vd;
    state = std::move(upd.state);
  }
}

TEST_CASE("readout-contrast error does not grow with shots") {
  const NoiseParams truth{{0.96, 0.95, 0.94, 0.93, 0.92}, 0.017, 0.017};
  const auto law = basis_distributions(bv1000(), truth)[0];
  const std::vector<double> th{0.93, 0.92, 0.017, 0.017};
  const auto want = contrasts(th);
  auto state = make_estimator(bv1000(), weak_prior(), GridSpec{});
  state.dirichlet.a = {1, 1, 1, 1};
  double prev = 1e9;
  for (std::uint64_t shots : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    std::vector<double> err;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto rng = make_rng(seed, shots);
      const auto upd = adaptive_update(state, sample_counts(law, shots, rng));
      const std::vector<double> est{upd.params.spam_fidelity[3], upd.params.spam_fidelity[4], upd.params.depol_control,
                                    upd.params.depol_target};
      const auto got = contrasts(est);
      err.push_back(std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1])));
    }
    std::nth_element(err.begin(), err.begin() + 10, err.end());
    const double median = err[10];
    CHECK(median <= prev + 1e-4);
    prev = median;
  }
  CHECK(prev < 2e-3);
}
