#include <doctest.h>

#include <cmath>

#include "clpqr/are.hpp"
#include "clpqr/loss.hpp"
#include "clpqr/rng.hpp"

using namespace clpqr;

TEST_CASE("closed-form ARE: GED(1,5) reproduces the reference value") {
  const auto r = are_cqr_closed(ErrorDistribution::ged(1.0, 5.0));
  CHECK(std::fabs(r.value - 0.8748277) < 1e-6);
  CHECK(r.std_error == 0.0);
}

TEST_CASE("closed-form ARE: mixture rho=1 and GED beta=2 both give 3/pi") {
  CHECK(are_cqr_closed(ErrorDistribution::mixture_two_normals(1.0)).value ==
        doctest::Approx(3.0 / M_PI).epsilon(1e-9));
  CHECK(are_cqr_closed(ErrorDistribution::ged(1.0, 2.0)).value ==
        doctest::Approx(3.0 / M_PI).epsilon(1e-9));
  CHECK(are_cqr_closed(ErrorDistribution::normal(4.0)).value ==
        doctest::Approx(3.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("generic ARE agrees with the closed forms") {
  for (double rho : {0.3, 0.5, 0.9, 1.0}) {
    const auto dist = ErrorDistribution::mixture_two_normals(rho);
    CHECK(are_cqr_generic(dist).value ==
          doctest::Approx(are_cqr_closed(dist).value).epsilon(1e-6));
  }
  for (double beta : {2.0, 4.0, 5.0}) {
    const auto dist = ErrorDistribution::ged(1.0, beta);
    CHECK(are_cqr_generic(dist).value ==
          doctest::Approx(are_cqr_closed(dist).value).epsilon(1e-6));
  }
  CHECK(are_cqr_generic(ErrorDistribution::normal(9.0)).value ==
        doctest::Approx(3.0 / M_PI).epsilon(1e-6));
}

TEST_CASE("ARE rejects unsupported inputs") {
  CHECK_THROWS_AS(are_cqr_closed(ErrorDistribution::cauchy()), std::invalid_argument);
  CHECK_THROWS_AS(are_cqr_closed(ErrorDistribution::student_t(3.0)), std::invalid_argument);
  CHECK_THROWS_AS(are_cqr_generic(ErrorDistribution::cauchy()), std::runtime_error);
  CHECK_THROWS_AS(are_clpqr_mc(ErrorDistribution::cauchy(), 1.5, 10000, 1),
                  std::runtime_error);
}

TEST_CASE("lp quantile transform is monotone and accurate off-grid") {
  const auto dist = ErrorDistribution::normal(1.0);
  const double p = 1.4;
  const auto inv = LpQuantileTransform::build(dist, p, 128);
  const auto& vals = inv.grid_values();
  for (Eigen::Index i = 1; i < vals.size(); ++i) CHECK(vals[i] > vals[i - 1]);
  CHECK(std::fabs(inv(0.5)) < 1e-6);

  Rng rng(31);
  for (int i = 0; i < 12; ++i) {
    const double u = 0.02 + 0.96 * rng.uniform();
    const double exact = lp_quantile_dist(dist, u, p).value;
    CHECK(std::fabs(inv(u) - exact) < 1e-4);
  }
}

TEST_CASE("expectile transform of N(0,1) vanishes at the center") {
  const auto inv = LpQuantileTransform::build(ErrorDistribution::normal(1.0), 2.0, 64);
  CHECK(std::fabs(inv(0.5)) < 1e-6);
}

TEST_CASE("ARE_CLpQR monte carlo: GED(1,5) behaves like the reference curve") {
  const auto ged = ErrorDistribution::ged(1.0, 5.0);
  const auto at_11 = are_clpqr_mc(ged, 1.1, 20000, 77);
  const auto at_20 = are_clpqr_mc(ged, 2.0, 20000, 77);
  const double sep = std::sqrt(at_11.std_error * at_11.std_error +
                               at_20.std_error * at_20.std_error);
  CHECK(at_20.value - at_11.value > 3.0 * sep);
  const auto near_one = are_clpqr_mc(ged, 1.05, 20000, 77);
  CHECK(std::fabs(near_one.value - 0.8748277) < 3.0 * near_one.std_error + 5e-3);
}

TEST_CASE("ARE_CLpQR monte carlo: mixture rho=0.9 exceeds ARE_CQR at moderate p") {
  const auto mix = ErrorDistribution::mixture_two_normals(0.9);
  const double cqr = are_cqr_closed(mix).value;
  const auto r = are_clpqr_mc(mix, 1.5, 20000, 5);
  CHECK(r.value > cqr);
}

TEST_CASE("finite-K variance factor: K=1, p=2, N(0,1) is the LS factor") {
  const double f = finite_k_variance_factor(ErrorDistribution::normal(1.0), 2.0, 1, 200000, 3);
  CHECK(f == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("finite-K variance factor approaches the limit at K=19") {
  const auto ged = ErrorDistribution::ged(1.0, 5.0);
  const double fk = finite_k_variance_factor(ged, 1.5, 19, 300000, 99);
  const auto lim = thm22_limit_factor_mc(ged, 1.5, 30000, 99);
  CHECK(std::fabs(fk / lim.value - 1.0) < 0.05);
}
