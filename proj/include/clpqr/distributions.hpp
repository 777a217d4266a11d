#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "clpqr/rng.hpp"

namespace clpqr {

// Centered error families used across the estimators, ARE formulas and the
// simulation study. All densities are symmetric about 0.
class ErrorDistribution {
 public:
  enum class Family { normal, student_t, cauchy, ged, mixture_two_normals };

  static ErrorDistribution normal(double variance);
  static ErrorDistribution student_t(double df);
  static ErrorDistribution cauchy();
  static ErrorDistribution ged(double alpha, double beta);
  // Density (1-rho) N(0,1) + rho N(0, rho^6), rho in (0, 1].
  static ErrorDistribution mixture_two_normals(double rho);

  Family family() const { return family_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }
  std::string name() const;

  double density(double x) const;
  double cdf(double x) const;
  // +inf for Cauchy (and t with df <= 2).
  double variance() const;
  // sup q with E|x|^q < inf: +inf for light tails, df for t, 1 for Cauchy.
  double max_finite_abs_moment() const;

  double sample_one(Rng& rng) const;
  Eigen::VectorXd sample(int n, std::uint64_t seed) const;

  // [L, U] with F(L) <= mass_eps and 1 - F(U) <= mass_eps.
  std::pair<double, double> bounds(double mass_eps) const;

  // integral of g(x) f(x) dx over [a, b] (infinities allowed); Cauchy goes
  // through the x = tan(theta) substitution so the range stays bounded.
  double expect_on(const std::function<double(double)>& g, double a, double b,
                   double tol = 1e-9) const;
  double expect(const std::function<double(double)>& g, double tol = 1e-9) const {
    return expect_on(g, -kInf, kInf, tol);
  }

  static constexpr double kInf = std::numeric_limits<double>::infinity();

 private:
  ErrorDistribution(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}

  Family family_;
  double p1_ = 0.0;
  double p2_ = 0.0;
};

}  // namespace clpqr
