#include <doctest.h>

#include <cmath>

#include "clpqr/distributions.hpp"
#include "clpqr/loss.hpp"
#include "clpqr/oracle.hpp"
#include "clpqr/rng.hpp"
#include "clpqr/special.hpp"

using namespace clpqr;

TEST_CASE("eta basic values") {
  CHECK(eta(0.0, {0.3, 1.7}) == 0.0);
  CHECK(eta(1.0, {0.5, 2.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eta(-2.0, {0.25, 2.0}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("phi basic values") {
  CHECK(phi(0.0, {0.4, 1.5}) == 0.0);
  CHECK(phi(1.0, {0.5, 2.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi(-1.0, {0.25, 2.0}) == doctest::Approx(-1.5).epsilon(1e-15));
  CHECK(phi(0.0, {0.3, 1.0}) == 0.0);  // subgradient midpoint at p = 1
}

TEST_CASE("psi basic values and floor clamp") {
  CHECK(psi(1.0, {0.5, 2.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi(-2.0, {0.25, 2.0}) == doctest::Approx(1.5).epsilon(1e-15));
  // floor clamp: p(p-1)|tau - I(0<0)| floor^{p-2} = 1.5 * 0.5 * 0.5 * 1e4
  CHECK(psi(0.0, {0.5, 1.5}) ==
        doctest::Approx(0.375 * std::pow(1e-8, -0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(psi(1.0, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("finite differences: phi matches d eta / d s") {
  Rng rng(11);
  int checked = 0;
  while (checked < 100) {
    const double s = 4.0 * (rng.uniform() - 0.5);
    if (std::fabs(s) < 0.01) continue;
    const LossSpec spec{0.05 + 0.9 * rng.uniform(), 1.0 + rng.uniform()};
    for (double h : {1e-4, 1e-5}) {
      const double fd = (eta(s + h, spec) - eta(s - h, spec)) / (2.0 * h);
      CHECK(fd == doctest::Approx(phi(s, spec)).epsilon(1e-4));
    }
    ++checked;
  }
}

TEST_CASE("finite differences: psi matches d phi / d s away from zero") {
  Rng rng(12);
  int checked = 0;
  while (checked < 100) {
    const double s = 4.0 * (rng.uniform() - 0.5);
    if (std::fabs(s) < 0.05) continue;
    const LossSpec spec{0.05 + 0.9 * rng.uniform(), 1.2 + 0.8 * rng.uniform()};
    const double h = 1e-5;
    const double fd = (phi(s + h, spec) - phi(s - h, spec)) / (2.0 * h);
    CHECK(fd == doctest::Approx(psi(s, spec)).epsilon(1e-4));
    ++checked;
  }
}

TEST_CASE("eta is convex in s") {
  Rng rng(13);
  for (int i = 0; i < 1000; ++i) {
    const LossSpec spec{0.05 + 0.9 * rng.uniform(), 1.0 + rng.uniform()};
    const double s1 = 6.0 * (rng.uniform() - 0.5);
    const double s2 = 6.0 * (rng.uniform() - 0.5);
    const double mid = eta(0.5 * (s1 + s2), spec);
    CHECK(mid <= 0.5 * (eta(s1, spec) + eta(s2, spec)) + 1e-12);
  }
}

TEST_CASE("vectorized kernels agree with scalar ones") {
  Rng rng(14);
  Eigen::ArrayXd s(64);
  for (int i = 0; i < s.size(); ++i) s[i] = 5.0 * (rng.uniform() - 0.5);
  s[7] = 0.0;
  for (double p : {1.0, 1.3, 2.0}) {
    const LossSpec spec{0.3, p};
    Eigen::ArrayXd out;
    phi_into(s, spec.tau, p, out);
    for (int i = 0; i < s.size(); ++i)
      CHECK(out[i] == doctest::Approx(phi(s[i], spec)).epsilon(1e-13));
    eta_into(s, spec.tau, p, out);
    for (int i = 0; i < s.size(); ++i)
      CHECK(out[i] == doctest::Approx(eta(s[i], spec)).epsilon(1e-13));
  }
}

TEST_CASE("lp_quantile_sample trivial cases") {
  Eigen::VectorXd v(3);
  v << 1.0, 2.0, 3.0;
  CHECK(lp_quantile_sample(v, {0.5, 2.0}).value == doctest::Approx(2.0).epsilon(1e-12));

  Eigen::VectorXd sym(2);
  sym << -1.0, 1.0;
  for (double p : {1.3, 1.7, 2.0})
    CHECK(lp_quantile_sample(sym, {0.5, p}).value == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
}

TEST_CASE("lp_quantile_sample p=2 tau=0.5 equals the mean") {
  Rng rng(15);
  Eigen::VectorXd v(37);
  for (int i = 0; i < v.size(); ++i) v[i] = 10.0 * rng.uniform() - 3.0;
  const double got = lp_quantile_sample(v, {0.5, 2.0}).value;
  CHECK(std::fabs(got - v.mean()) < 1e-10);
}

TEST_CASE("lp_quantile_sample against dense grid search") {
  Eigen::VectorXd v(5);
  v << 0.0, 1.0, 2.0, 3.0, 4.0;
  const LossSpec spec{0.7, 1.5};
  const auto obj = [&](double b) {
    double s = 0.0;
    for (int i = 0; i < v.size(); ++i) s += eta(v[i] - b, spec);
    return s;
  };
  const auto oracle = grid_minimize_1d(obj, 0.0, 4.0, 1e-6);
  const auto got = lp_quantile_sample(v, spec);
  CHECK(std::fabs(got.value - oracle.minimizer[0]) < 2e-6);
  // frozen from the grid oracle at step 1e-6
  CHECK(got.value == doctest::Approx(2.7343890).epsilon(1e-5));
}

TEST_CASE("lp_quantile_sample monotone in tau") {
  Rng rng(16);
  Eigen::VectorXd v(21);
  for (int i = 0; i < v.size(); ++i) v[i] = 4.0 * rng.normal();
  for (double p : {1.2, 1.7, 2.0}) {
    double prev = -1e100;
    for (double tau = 0.05; tau < 1.0; tau += 0.05) {
      const double q = lp_quantile_sample(v, {tau, p}).value;
      CHECK(q >= prev - 1e-9);
      prev = q;
    }
  }
}

TEST_CASE("lp_quantile_sample rejects bad input") {
  Eigen::VectorXd empty;
  CHECK_THROWS_AS(lp_quantile_sample(empty, {0.5, 2.0}), std::invalid_argument);
  Eigen::VectorXd bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(lp_quantile_sample(bad, {0.5, 2.0}), std::invalid_argument);
}

TEST_CASE("lp_quantile_dist symmetric cases") {
  const auto n01 = ErrorDistribution::normal(1.0);
  for (double p : {1.2, 1.5, 2.0})
    CHECK(std::fabs(lp_quantile_dist(n01, 0.5, p).value) < 1e-8);
  const auto n09 = ErrorDistribution::normal(9.0);
  CHECK(std::fabs(lp_quantile_dist(n09, 0.5, 2.0).value) < 1e-8);
}

TEST_CASE("lp_quantile_dist near-quantile limit (Lemma 4)") {
  const auto n01 = ErrorDistribution::normal(1.0);
  const double target = normal_quantile(0.25);
  CHECK(std::fabs(lp_quantile_dist(n01, 0.25, 1.001).value - target) < 5e-3);

  double prev = 1e100;
  for (double p : {1.2, 1.1, 1.01, 1.001}) {
    const double gap = std::fabs(lp_quantile_dist(n01, 0.25, p).value - target);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("lp_quantile_dist moment guard") {
  const auto cauchy = ErrorDistribution::cauchy();
  CHECK_THROWS_AS(lp_quantile_dist(cauchy, 0.5, 2.0), std::runtime_error);
  CHECK_NOTHROW(lp_quantile_dist(cauchy, 0.3, 1.5));
}
