#include "clpqr/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clpqr/distributions.hpp"

namespace clpqr {

LpQuantileResult lp_quantile_sample(const Eigen::VectorXd& values, const LossSpec& spec,
                                    double tol) {
  spec.validate();
  if (values.size() == 0) throw std::invalid_argument("lp_quantile_sample: empty input");
  if (!values.allFinite()) throw std::invalid_argument("lp_quantile_sample: non-finite entries");
  if (!(spec.p > 1.0)) throw std::invalid_argument("lp_quantile_sample: requires p > 1");

  const double n = static_cast<double>(values.size());
  const auto deriv = [&](double b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) s += phi(values[i] - b, spec);
    return s / n;  // decreasing in b
  };

  double lo = values.minCoeff(), hi = values.maxCoeff();
  LpQuantileResult res;
  if (lo == hi) {
    res.value = lo;
    return res;
  }

  double b = 0.5 * (lo + hi), g = deriv(b);
  const double scale = std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  while (hi - lo > 1e-14 * scale && std::fabs(g) > tol) {
    (g > 0.0 ? lo : hi) = b;
    b = 0.5 * (lo + hi);
    g = deriv(b);
    ++res.iterations;
  }
  // Newton polish on the monotone derivative, kept inside the bracket.
  for (int it = 0; it < 8 && std::fabs(g) > tol; ++it) {
    double curv = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) curv += psi(values[i] - b, spec);
    curv /= n;
    if (!(curv > 0.0)) break;
    const double next = std::clamp(b + g / curv, lo, hi);
    if (next == b) break;
    b = next;
    g = deriv(b);
    ++res.iterations;
  }
  res.value = b;
  res.residual = std::fabs(g);
  return res;
}

LpQuantileResult lp_quantile_dist(const ErrorDistribution& dist, double tau, double p,
                                  double tol) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("lp_quantile_dist: tau outside (0,1)");
  if (!(p > 1.0)) throw std::invalid_argument("lp_quantile_dist: requires p > 1");
  if (p - 1.0 >= dist.max_finite_abs_moment())
    throw std::runtime_error("lp_quantile_dist: E|eps|^(p-1) not finite for this family");

  const double kInf = ErrorDistribution::kInf;
  const double quad_tol = std::min(1e-9, 0.01 * tol);
  const auto ratio = [&](double b) {
    const double lower = dist.expect_on(
        [&](double r) { return std::pow(b - r, p - 1.0); }, -kInf, b, quad_tol);
    const double upper = dist.expect_on(
        [&](double r) { return std::pow(r - b, p - 1.0); }, b, kInf, quad_tol);
    return lower / (lower + upper);
  };

  auto [lo, hi] = dist.bounds(1e-6 * std::min(tau, 1.0 - tau));
  for (int i = 0; i < 32 && ratio(lo) > tau; ++i) lo *= 2.0;
  for (int i = 0; i < 32 && ratio(hi) < tau; ++i) hi *= 2.0;
  LpQuantileResult res;
  double b = 0.0, r = ratio(b);
  if (r > tau) hi = 0.0; else lo = 0.0;
  const double scale = std::max(1.0, std::max(std::fabs(lo), std::fabs(hi)));
  while (std::fabs(r - tau) > tol && hi - lo > 1e-13 * scale) {
    b = 0.5 * (lo + hi);
    r = ratio(b);
    (r > tau ? hi : lo) = b;
    ++res.iterations;
    if (res.iterations > 200)
      throw std::runtime_error("lp_quantile_dist: bisection failed to converge");
  }
  res.value = b;
  res.residual = std::fabs(r - tau);
  return res;
}

}  // namespace clpqr
