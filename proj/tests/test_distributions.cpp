#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "clpqr/distributions.hpp"
#include "clpqr/special.hpp"

using namespace clpqr;

namespace {

std::vector<ErrorDistribution> all_families() {
  return {ErrorDistribution::normal(9.0), ErrorDistribution::student_t(3.0),
          ErrorDistribution::cauchy(), ErrorDistribution::ged(1.0, 4.0),
          ErrorDistribution::ged(1.0, 5.0), ErrorDistribution::mixture_two_normals(0.5),
          ErrorDistribution::mixture_two_normals(1.0)};
}

double ks_statistic(Eigen::VectorXd sample, const ErrorDistribution& dist) {
  std::sort(sample.data(), sample.data() + sample.size());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double F = dist.cdf(sample[i]);
    d = std::max(d, std::fabs(F - (i + 1) / n));
    d = std::max(d, std::fabs(F - i / n));
  }
  return d;
}

}  // namespace

TEST_CASE("densities integrate to one") {
  for (const auto& dist : all_families()) {
    CAPTURE(dist.name());
    const double mass = dist.expect([](double) { return 1.0; }, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("cdf matches integrated density") {
  for (const auto& dist : all_families()) {
    CAPTURE(dist.name());
    for (double x : {-2.3, -0.4, 0.0, 0.7, 1.9}) {
      const double mass = dist.expect_on([](double) { return 1.0; },
                                         -ErrorDistribution::kInf, x, 1e-10);
      CHECK(mass == doctest::Approx(dist.cdf(x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("mixture density is the displayed two-term form") {
  const double rho = 0.37;
  const auto dist = ErrorDistribution::mixture_two_normals(rho);
  for (double x : {-1.5, -0.2, 0.0, 0.3, 2.0}) {
    const double expected =
        (1.0 - rho) / std::sqrt(2.0 * M_PI) * std::exp(-0.5 * x * x) +
        1.0 / (rho * rho * std::sqrt(2.0 * M_PI)) *
            std::exp(-x * x / (2.0 * std::pow(rho, 6.0)));
    CHECK(dist.density(x) == doctest::Approx(expected).epsilon(1e-13));
  }
  // component masses read off as (1-rho, rho)
  const double mass = dist.expect([](double) { return 1.0; }, 1e-10);
  CHECK(mass == doctest::Approx((1.0 - rho) + rho).epsilon(1e-6));
}

TEST_CASE("variances") {
  CHECK(ErrorDistribution::normal(9.0).variance() == 9.0);
  CHECK(ErrorDistribution::student_t(3.0).variance() == doctest::Approx(3.0));
  CHECK(!std::isfinite(ErrorDistribution::cauchy().variance()));
  const double rho = 0.5;
  CHECK(ErrorDistribution::mixture_two_normals(rho).variance() ==
        doctest::Approx(1.0 - rho + std::pow(rho, 7.0)).epsilon(1e-14));
  // GED variance against the quadrature second moment
  const auto e4 = ErrorDistribution::ged(1.0, 4.0);
  const double m2 = e4.expect([](double x) { return x * x; }, 1e-10);
  CHECK(e4.variance() == doctest::Approx(m2).epsilon(1e-7));
}

TEST_CASE("samplers pass Kolmogorov-Smirnov at n = 1e5") {
  const int n = 100000;
  const double crit = 1.9495 / std::sqrt(static_cast<double>(n));  // alpha = 1e-3
  int family = 0;
  for (const auto& dist : all_families()) {
    CAPTURE(dist.name());
    const auto sample = dist.sample(n, 7000 + family++);
    CHECK(ks_statistic(sample, dist) < crit);
  }
}

TEST_CASE("sample moments of N(0,9)") {
  const auto dist = ErrorDistribution::normal(9.0);
  const auto sample = dist.sample(1000000, 42);
  CHECK(std::fabs(sample.mean()) < 0.01);
  const double var = (sample.array() - sample.mean()).square().mean();
  CHECK(var == doctest::Approx(9.0).epsilon(0.02));
}

TEST_CASE("E4 kurtosis is platykurtic, sample vs quadrature") {
  const auto e4 = ErrorDistribution::ged(1.0, 4.0);
  const double m2 = e4.expect([](double x) { return x * x; }, 1e-10);
  const double m4 = e4.expect([](double x) { return x * x * x * x; }, 1e-10);
  const double kurt = m4 / (m2 * m2);
  CHECK(kurt < 3.0);
  const auto sample = e4.sample(200000, 9);
  const double s2 = sample.array().square().mean();
  const double s4 = sample.array().pow(4).mean();
  CHECK(s4 / (s2 * s2) == doctest::Approx(kurt).epsilon(0.05));
}

TEST_CASE("sampling is deterministic per seed") {
  const auto dist = ErrorDistribution::student_t(3.0);
  const auto a = dist.sample(64, 123);
  const auto b = dist.sample(64, 123);
  const auto c = dist.sample(64, 124);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("student t cdf against closed form for df = 3") {
  const auto t3 = ErrorDistribution::student_t(3.0);
  for (double x : {-4.0, -1.2, 0.0, 0.5, 2.7}) {
    const double u = x / std::sqrt(3.0);
    const double closed = 0.5 + (u / (1.0 + u * u) + std::atan(u)) / M_PI;
    CHECK(t3.cdf(x) == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ErrorDistribution::normal(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ErrorDistribution::mixture_two_normals(1.5), std::invalid_argument);
  CHECK_THROWS_AS(ErrorDistribution::ged(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ErrorDistribution::normal(9.0).sample(0, 1), std::invalid_argument);
}
