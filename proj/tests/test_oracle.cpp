#include <doctest.h>

#include <cmath>

#include "clpqr/oracle.hpp"
#include "clpqr/rng.hpp"

using namespace clpqr;

TEST_CASE("grid_minimize_1d basics") {
  const auto parab = grid_minimize_1d([](double x) { return x * x; }, -1.0, 1.0, 1e-4);
  CHECK(std::fabs(parab.minimizer[0]) < 1e-4);

  const auto kink = grid_minimize_1d([](double x) { return std::fabs(x - 0.3); }, -1.0,
                                     1.0, 1e-5);
  CHECK(std::fabs(kink.minimizer[0] - 0.3) < 1e-5);

  CHECK_THROWS_AS(grid_minimize_1d([](double) { return 1.0; }, 1.0, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      grid_minimize_1d([](double x) { return x > 0 ? std::nan("") : 0.0; }, -1.0, 1.0, 0.5),
      std::runtime_error);
}

TEST_CASE("grid_minimize_1d improves under refinement") {
  const auto f = [](double x) { return std::pow(x - 0.123456, 4.0); };
  double prev = 1e100;
  for (double step : {1e-2, 1e-3, 1e-4}) {
    const auto sol = grid_minimize_1d(f, -1.0, 1.0, step);
    CHECK(sol.objective <= prev + 1e-18);
    prev = sol.objective;
  }
}

TEST_CASE("least_squares_closed exact cases") {
  Dataset line;
  line.X.resize(2, 1);
  line.X << 1.0, 2.0;
  line.y.resize(2);
  line.y << 2.0, 4.0;
  const auto sol = least_squares_closed(line, false);
  CHECK(sol.minimizer[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
}

TEST_CASE("least_squares_closed residuals are orthogonal to the design") {
  Rng rng(23);
  Dataset d;
  d.X.resize(50, 3);
  d.y.resize(50);
  for (int t = 0; t < 50; ++t) {
    for (int j = 0; j < 3; ++j) d.X(t, j) = rng.normal();
    d.y[t] = rng.normal();
  }
  const auto sol = least_squares_closed(d, true);
  Eigen::MatrixXd A(50, 4);
  A.col(0).setOnes();
  A.rightCols(3) = d.X;
  const Eigen::VectorXd res = d.y - A * sol.minimizer;
  CHECK((A.transpose() * res).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("exact composite L1: intercept-only instances hit sample quantiles") {
  Dataset d;
  d.X = Eigen::MatrixXd::Ones(7, 1);
  d.y.resize(7);
  d.y << 3.0, -1.0, 4.0, 1.0, 5.0, 9.0, 2.0;

  Eigen::VectorXd tau_med(1);
  tau_med << 0.5;
  const auto med = exact_composite_l1_small(d, tau_med);
  CHECK(med.minimizer[0] + med.minimizer[1] == doctest::Approx(3.0).epsilon(1e-12));

  Eigen::VectorXd tau_q(1);
  tau_q << 0.25;
  const auto q = exact_composite_l1_small(d, tau_q);
  // lower convention: ceil(0.25 * 7) = 2nd order statistic
  CHECK(q.minimizer[0] + q.minimizer[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact composite L1 rejects oversized instances") {
  Dataset d;
  d.X = Eigen::MatrixXd::Ones(20, 1);
  d.y = Eigen::VectorXd::Zero(20);
  Eigen::VectorXd taus(1);
  taus << 0.5;
  CHECK_THROWS_AS(exact_composite_l1_small(d, taus), std::invalid_argument);
}
