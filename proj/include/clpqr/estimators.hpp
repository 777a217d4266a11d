#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "clpqr/data.hpp"
#include "clpqr/solver.hpp"

namespace clpqr {

// (1/(K+1), ..., K/(K+1)).
Eigen::VectorXd equally_spaced_taus(int K);

// Unpenalized composite L^p-quantile regression on the equally spaced grid.
CompositeFit fit_clpqr(const Dataset& data, int K, double p, const SolverConfig& config);

struct OracleFit {
  CompositeFit stage1;  // unpenalized pilot
  CompositeFit fit;     // adaptively penalized
  double lambda = 0.0;
  std::vector<int> support;  // { j : fit.beta[j] != 0 }
};

// Adaptive-lasso CLpQR: stage-1 pilot, then weights
// w_j = min((lambda/T) / |beta1_j|^2, w_max).
OracleFit fit_aclpqr(const Dataset& data, int K, double p, double lambda,
                     const SolverConfig& config, double w_max = 1e12);

// 30 log-spaced points on [1e-4, 1e2] * sqrt(T).
Eigen::VectorXd default_lambda_grid(Eigen::Index T, int n = 30);

// Fits the grid descending with warm starts, scores each lambda by the
// unpenalized composite loss on the tuning set, ties broken toward the
// larger (sparser) lambda.
std::pair<double, OracleFit> tune_lambda(const Dataset& train, const Dataset& tune, int K,
                                         double p, const Eigen::VectorXd& grid,
                                         const SolverConfig& config, double w_max = 1e12);

struct NearQrFit {
  Eigen::VectorXd beta;
  CompositeFit fit;
  bool p_above_near_range = false;  // p > 1.1 soft bound
};

// Near quantile regression: single-level fit with no intercept of its own;
// callers wanting one include a constant column in the design.
NearQrFit fit_near_qr_full(const Dataset& data, double tau, double p,
                           const SolverConfig& config);
Eigen::VectorXd fit_near_qr(const Dataset& data, double tau, double p,
                            const SolverConfig& config);

struct CovarianceEstimate {
  Eigen::MatrixXd sigma0;
  double psi_mean = 0.0;
  Eigen::MatrixXd gram_inverse;  // (X'X/T)^{-1}
};

// Sigma0_hat = tau(1-tau) / psi_mean^2 * (X'X/T)^{-1} with the psi floor
// guarding zero residuals.
CovarianceEstimate estimate_sigma0(const Dataset& data, const Eigen::VectorXd& beta_hat,
                                   double tau, double p, double floor = 1e-8);

}  // namespace clpqr
