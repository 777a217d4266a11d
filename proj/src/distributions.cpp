#include "clpqr/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clpqr/quadrature.hpp"
#include "clpqr/special.hpp"

namespace clpqr {

// variance == 0 is the point-mass edge used by noiseless simulations; its
// sampler returns zeros while density/cdf stay undefined.
ErrorDistribution ErrorDistribution::normal(double variance) {
  if (!(variance >= 0.0)) throw std::invalid_argument("normal: variance must be nonnegative");
  return {Family::normal, variance, 0.0};
}

ErrorDistribution ErrorDistribution::student_t(double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t: df must be positive");
  return {Family::student_t, df, 0.0};
}

ErrorDistribution ErrorDistribution::cauchy() { return {Family::cauchy, 0.0, 0.0}; }

ErrorDistribution ErrorDistribution::ged(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) throw std::invalid_argument("ged: alpha, beta must be positive");
  return {Family::ged, alpha, beta};
}

ErrorDistribution ErrorDistribution::mixture_two_normals(double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw std::invalid_argument("mixture_two_normals: rho outside (0,1]");
  return {Family::mixture_two_normals, rho, 0.0};
}

std::string ErrorDistribution::name() const {
  switch (family_) {
    case Family::normal: return "normal(var=" + std::to_string(p1_) + ")";
    case Family::student_t: return "student_t(df=" + std::to_string(p1_) + ")";
    case Family::cauchy: return "cauchy";
    case Family::ged: return "ged(alpha=" + std::to_string(p1_) + ",beta=" + std::to_string(p2_) + ")";
    case Family::mixture_two_normals: return "mixture(rho=" + std::to_string(p1_) + ")";
  }
  return "?";
}

double ErrorDistribution::density(double x) const {
  switch (family_) {
    case Family::normal: {
      const double sd = std::sqrt(p1_);
      return normal_pdf(x / sd) / sd;
    }
    case Family::student_t: {
      const double nu = p1_;
      const double c = std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
                       std::sqrt(nu * M_PI);
      return c * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0));
    }
    case Family::cauchy:
      return 1.0 / (M_PI * (1.0 + x * x));
    case Family::ged: {
      const double a = p1_, b = p2_;
      return b / (2.0 * a * std::tgamma(1.0 / b)) * std::exp(-std::pow(std::fabs(x) / a, b));
    }
    case Family::mixture_two_normals: {
      const double rho = p1_, s = rho * rho * rho;
      return (1.0 - rho) * normal_pdf(x) + rho * normal_pdf(x / s) / s;
    }
  }
  return 0.0;
}

double ErrorDistribution::cdf(double x) const {
  switch (family_) {
    case Family::normal:
      return normal_cdf(x / std::sqrt(p1_));
    case Family::student_t: {
      const double nu = p1_;
      if (x == 0.0) return 0.5;
      const double ib = reg_inc_beta(nu / (nu + x * x), 0.5 * nu, 0.5);
      return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
    }
    case Family::cauchy:
      return 0.5 + std::atan(x) / M_PI;
    case Family::ged: {
      const double a = p1_, b = p2_;
      if (x == 0.0) return 0.5;
      const double g = reg_lower_gamma(1.0 / b, std::pow(std::fabs(x) / a, b));
      return 0.5 + (x > 0.0 ? 0.5 * g : -0.5 * g);
    }
    case Family::mixture_two_normals: {
      const double rho = p1_, s = rho * rho * rho;
      return (1.0 - rho) * normal_cdf(x) + rho * normal_cdf(x / s);
    }
  }
  return 0.0;
}

double ErrorDistribution::variance() const {
  switch (family_) {
    case Family::normal: return p1_;
    case Family::student_t: return p1_ > 2.0 ? p1_ / (p1_ - 2.0) : kInf;
    case Family::cauchy: return kInf;
    case Family::ged: {
      const double a = p1_, b = p2_;
      return a * a * std::exp(std::lgamma(3.0 / b) - std::lgamma(1.0 / b));
    }
    case Family::mixture_two_normals: {
      const double rho = p1_;
      return 1.0 - rho + std::pow(rho, 7.0);
    }
  }
  return kInf;
}

double ErrorDistribution::max_finite_abs_moment() const {
  switch (family_) {
    case Family::student_t: return p1_;
    case Family::cauchy: return 1.0;
    default: return kInf;
  }
}

double ErrorDistribution::sample_one(Rng& rng) const {
  switch (family_) {
    case Family::normal:
      return std::sqrt(p1_) * rng.normal();
    case Family::student_t: {
      const double nu = p1_;
      const double chi2 = 2.0 * rng.gamma(0.5 * nu);
      return rng.normal() / std::sqrt(chi2 / nu);
    }
    case Family::cauchy:
      return std::tan(M_PI * (rng.uniform() - 0.5));
    case Family::ged: {
      const double a = p1_, b = p2_;
      const double mag = a * std::pow(rng.gamma(1.0 / b), 1.0 / b);
      return rng.uniform() < 0.5 ? -mag : mag;
    }
    case Family::mixture_two_normals: {
      const double rho = p1_;
      if (rng.uniform() < 1.0 - rho) return rng.normal();
      return rho * rho * rho * rng.normal();
    }
  }
  return 0.0;
}

Eigen::VectorXd ErrorDistribution::sample(int n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Rng rng(seed);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = sample_one(rng);
  return out;
}

std::pair<double, double> ErrorDistribution::bounds(double mass_eps) const {
  double hi = 1.0;
  for (int i = 0; i < 2048 && cdf(-hi) > mass_eps; ++i) hi *= 2.0;
  // tighten by bisection so light-tailed families keep short ranges
  double lo = hi * 0.5;
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(-mid) > mass_eps ? lo : hi) = mid;
  }
  return {-hi, hi};
}

double ErrorDistribution::expect_on(const std::function<double(double)>& g, double a,
                                    double b, double tol) const {
  if (a >= b) return 0.0;
  if (family_ == Family::cauchy) {
    const double eps_angle = 1e-14;
    const double ta = std::max(std::atan(a), -0.5 * M_PI + eps_angle);
    const double tb = std::min(std::atan(b), 0.5 * M_PI - eps_angle);
    if (ta >= tb) return 0.0;
    return integrate([&](double th) { return g(std::tan(th)) / M_PI; }, ta, tb, tol);
  }
  const auto [lo, hi] = bounds(1e-14);
  const double aa = std::max(a, lo), bb = std::min(b, hi);
  if (aa >= bb) return 0.0;
  return integrate([&](double x) { return g(x) * density(x); }, aa, bb, tol);
}

}  // namespace clpqr
