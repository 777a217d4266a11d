#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace clpqr {

class ErrorDistribution;

// Asymmetric power loss eta_{tau,p}(s) = |tau - I(s<0)| |s|^p and its
// derivative kernels. tau in (0,1); p >= 1 accepted by the solver, the
// asymptotic theory lives on (1, 2].
struct LossSpec {
  double tau = 0.5;
  double p = 2.0;

  void validate() const {
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("LossSpec: tau outside (0,1)");
    if (!(p >= 1.0)) throw std::invalid_argument("LossSpec: p < 1");
  }
};

inline double loss_weight(double s, double tau) { return s < 0.0 ? 1.0 - tau : tau; }

inline double eta(double s, const LossSpec& spec) {
  return loss_weight(s, spec.tau) * std::pow(std::fabs(s), spec.p);
}

// phi = d eta / d s for p > 1; for p = 1 the subgradient selection with
// sign(0) = 0, which is the pointwise limit of phi as p -> 1+.
inline double phi(double s, const LossSpec& spec) {
  const double w = loss_weight(s, spec.tau);
  if (spec.p == 1.0) return s > 0.0 ? w : (s < 0.0 ? -w : 0.0);
  if (s == 0.0) return 0.0;
  const double sign = s > 0.0 ? 1.0 : -1.0;
  return spec.p * w * std::pow(std::fabs(s), spec.p - 1.0) * sign;
}

// psi = p(p-1)|tau - I(s<0)| max(|s|, floor)^{p-2}; the floor guards the
// singularity at s = 0 when p < 2.
inline double psi(double s, const LossSpec& spec, double floor = 1e-8) {
  if (!(spec.p > 1.0)) throw std::invalid_argument("psi: requires p > 1");
  if (!(floor > 0.0)) throw std::invalid_argument("psi: floor must be positive");
  const double a = std::max(std::fabs(s), floor);
  return spec.p * (spec.p - 1.0) * loss_weight(s, spec.tau) * std::pow(a, spec.p - 2.0);
}

// Vectorized kernels over residual arrays. p == 2 and p == 1 avoid the
// exp/log path; the general case uses Eigen's vectorized exp/log and maps
// zero residuals to zero (valid for exponent p-1 > 0).
// |tau - I(s<0)| as tau + (1-2 tau) I(s<0), branch-free.
inline Eigen::ArrayXd loss_weights(const Eigen::ArrayXd& s, double tau) {
  return tau + (1.0 - 2.0 * tau) * (s < 0.0).cast<double>();
}

inline void eta_into(const Eigen::ArrayXd& s, double tau, double p, Eigen::ArrayXd& out) {
  if (p == 2.0) {
    out = loss_weights(s, tau) * s.square();
  } else if (p == 1.0) {
    out = loss_weights(s, tau) * s.abs();
  } else {
    // the != 0 mask matters: SIMD exp(-inf) yields a denormal, not 0
    out = loss_weights(s, tau) * (s != 0.0).cast<double>() * (p * s.abs().log()).exp();
  }
}

inline void phi_into(const Eigen::ArrayXd& s, double tau, double p, Eigen::ArrayXd& out) {
  if (p == 2.0) {
    out = 2.0 * loss_weights(s, tau) * s;
  } else if (p == 1.0) {
    out = loss_weights(s, tau) * s.sign();
  } else {
    out = p * loss_weights(s, tau) * s.sign() * ((p - 1.0) * s.abs().log()).exp();
  }
}

inline double eta_sum(const Eigen::ArrayXd& s, double tau, double p) {
  if (p == 2.0) return (loss_weights(s, tau) * s.square()).sum();
  if (p == 1.0) return (loss_weights(s, tau) * s.abs()).sum();
  Eigen::ArrayXd tmp;
  eta_into(s, tau, p, tmp);
  return tmp.sum();
}

struct LpQuantileResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // |normalized derivative| at the solution
};

// Empirical tau-th L^p-quantile: the root of sum_i phi(v_i - b) = 0,
// bracketed on [min v, max v] and polished by safeguarded Newton. p > 1.
LpQuantileResult lp_quantile_sample(const Eigen::VectorXd& values, const LossSpec& spec,
                                    double tol = 1e-10);

// Population tau-th L^p-quantile of a distribution: solves the Theorem-2.2
// ratio equation by bisection over adaptive quadrature. Requires
// E|eps|^{p-1} finite (Cauchy only for p < 2).
LpQuantileResult lp_quantile_dist(const ErrorDistribution& dist, double tau, double p,
                                  double tol = 1e-10);

}  // namespace clpqr
