#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "clpqr/distributions.hpp"

namespace clpqr {

struct AREResult {
  enum class Method { closed_form, monte_carlo };
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::closed_form;
  long n_samples = 0;
};

// Closed-form ARE of composite quantile regression against least squares for
// the two-normal mixture and the GED (Normal accepted as mixture rho = 1).
AREResult are_cqr_closed(const ErrorDistribution& dist);

// Quadrature route: 12 sigma^2 (integral of f^2)^2. The displayed formula
// omits the sigma^2 factor that both closed-form cases carry; this routine
// matches the closed forms, which are treated as ground truth.
AREResult are_cqr_generic(const ErrorDistribution& dist, double tol = 1e-9);

// Monotone interpolator for the L^p-quantile function F^{-1}_{eps,p},
// tabulated on a Chebyshev-spaced tau grid.
class LpQuantileTransform {
 public:
  static LpQuantileTransform build(const ErrorDistribution& dist, double p,
                                   int grid_size = 256);

  // F^{-1}_{eps,p}(u); u clamped to the tabulated range.
  double operator()(double u) const;

  const Eigen::VectorXd& grid_taus() const { return taus_; }
  const Eigen::VectorXd& grid_values() const { return values_; }

 private:
  Eigen::VectorXd taus_, values_, slopes_;
};

// Shared nested Monte-Carlo core for the Theorem-2.2 limit: outer draws of
// (eps_a, eps_b, eps_c) through the L^p-quantile transform, a fresh inner
// batch of eps per outer draw for the conditional expectations.
struct LimitMcMoments {
  double numerator_mean = 0.0;    // E (F(c)-I)(F(b)-I)|e-b|^{p-1}|e-c|^{p-1}
  double denominator_mean = 0.0;  // E |F(a)-I| |e-a|^{p-2}
  double var_num = 0.0, var_den = 0.0, cov = 0.0;  // of the two sample means
  long n_outer = 0;
};

LimitMcMoments limit_mc_moments(const ErrorDistribution& dist, double p, long n_outer,
                                std::uint64_t seed, int n_inner = 64);

// ARE of CLpQR against least squares, Monte-Carlo on the limit
// representation; delta-method standard error.
AREResult are_clpqr_mc(const ErrorDistribution& dist, double p, long n_outer,
                       std::uint64_t seed, int n_inner = 64);

// The limit of the Theorem-2.1 variance fraction as K grows, with its
// delta-method standard error.
AREResult thm22_limit_factor_mc(const ErrorDistribution& dist, double p, long n_outer,
                                std::uint64_t seed, int n_inner = 64);

// Monte-Carlo estimate of the finite-K variance fraction with the b*_k taken
// from lp_quantile_dist at tau_k = k/(K+1).
double finite_k_variance_factor(const ErrorDistribution& dist, double p, int K, long n,
                                std::uint64_t seed);

}  // namespace clpqr
