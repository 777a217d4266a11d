#include "clpqr/estimators.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clpqr/loss.hpp"

namespace clpqr {

Eigen::VectorXd equally_spaced_taus(int K) {
  if (K < 1) throw std::invalid_argument("equally_spaced_taus: K must be >= 1");
  Eigen::VectorXd taus(K);
  for (int k = 0; k < K; ++k) taus[k] = static_cast<double>(k + 1) / (K + 1);
  return taus;
}

CompositeFit fit_clpqr(const Dataset& data, int K, double p, const SolverConfig& config) {
  data.validate();
  if (data.rows() <= data.cols())
    throw std::invalid_argument("fit_clpqr: requires T > m");
  return fit(data, equally_spaced_taus(K), p, PenaltyWeights::zeros(data.cols()), config);
}

namespace {

PenaltyWeights adaptive_weights(const Eigen::VectorXd& pilot, double lambda, double T,
                                double w_max) {
  PenaltyWeights weights = PenaltyWeights::zeros(pilot.size());
  if (lambda == 0.0) return weights;
  for (Eigen::Index j = 0; j < pilot.size(); ++j) {
    const double denom = pilot[j] * pilot[j];
    weights.w[j] = denom > 0.0 ? std::min(lambda / T / denom, w_max) : w_max;
  }
  return weights;
}

std::vector<int> nonzero_support(const Eigen::VectorXd& beta) {
  std::vector<int> support;
  for (Eigen::Index j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) support.push_back(static_cast<int>(j));
  return support;
}

}  // namespace

OracleFit fit_aclpqr(const Dataset& data, int K, double p, double lambda,
                     const SolverConfig& config, double w_max) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("fit_aclpqr: lambda must be >= 0");
  OracleFit out;
  out.lambda = lambda;
  out.stage1 = fit_clpqr(data, K, p, config);
  const auto weights =
      adaptive_weights(out.stage1.beta, lambda, static_cast<double>(data.rows()), w_max);
  out.fit = fit(data, equally_spaced_taus(K), p, weights, config);
  out.support = nonzero_support(out.fit.beta);
  return out;
}

Eigen::VectorXd default_lambda_grid(Eigen::Index T, int n) {
  if (n < 1) throw std::invalid_argument("default_lambda_grid: n must be >= 1");
  const double scale = std::sqrt(static_cast<double>(T));
  Eigen::VectorXd grid(n);
  if (n == 1) {
    grid[0] = scale;
    return grid;
  }
  const double lo = std::log(1e-4), hi = std::log(1e2);
  for (int i = 0; i < n; ++i)
    grid[i] = scale * std::exp(lo + (hi - lo) * i / (n - 1.0));
  return grid;
}

std::pair<double, OracleFit> tune_lambda(const Dataset& train, const Dataset& tune, int K,
                                         double p, const Eigen::VectorXd& grid,
                                         const SolverConfig& config, double w_max) {
  if (grid.size() == 0) throw std::invalid_argument("tune_lambda: empty grid");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0)) throw std::invalid_argument("tune_lambda: negative lambda");
    if (i > 0 && grid[i] < grid[i - 1])
      throw std::invalid_argument("tune_lambda: grid not sorted ascending");
  }
  tune.validate();
  if (tune.cols() != train.cols()) throw std::invalid_argument("tune_lambda: column mismatch");

  const Eigen::VectorXd taus = equally_spaced_taus(K);
  const CompositeFit stage1 = fit_clpqr(train, K, p, config);
  const double T = static_cast<double>(train.rows());
  const PenaltyWeights no_penalty = PenaltyWeights::zeros(train.cols());

  OracleFit best;
  best.stage1 = stage1;
  double best_loss = std::numeric_limits<double>::infinity();
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> warm;
  for (Eigen::Index i = grid.size() - 1; i >= 0; --i) {
    const double lambda = grid[i];
    const auto weights = adaptive_weights(stage1.beta, lambda, T, w_max);
    const CompositeFit f = fit(train, taus, p, weights, config, warm);
    warm = std::make_pair(f.b, f.beta);
    const double loss = objective(tune, taus, p, f.b, f.beta, no_penalty);
    if (loss < best_loss) {
      best_loss = loss;
      best.fit = f;
      best.lambda = lambda;
    }
  }
  best.support = nonzero_support(best.fit.beta);
  return {best.lambda, best};
}

NearQrFit fit_near_qr_full(const Dataset& data, double tau, double p,
                           const SolverConfig& config) {
  if (!(p >= 1.0)) throw std::invalid_argument("fit_near_qr: p < 1");
  NearQrFit out;
  out.p_above_near_range = p > 1.1;
  Eigen::VectorXd taus(1);
  taus[0] = tau;
  out.fit = fit(data, taus, p, PenaltyWeights::zeros(data.cols()), config, {},
                /*with_intercepts=*/false);
  out.beta = out.fit.beta;
  return out;
}

Eigen::VectorXd fit_near_qr(const Dataset& data, double tau, double p,
                            const SolverConfig& config) {
  return fit_near_qr_full(data, tau, p, config).beta;
}

CovarianceEstimate estimate_sigma0(const Dataset& data, const Eigen::VectorXd& beta_hat,
                                   double tau, double p, double floor) {
  data.validate();
  if (beta_hat.size() != data.cols())
    throw std::invalid_argument("estimate_sigma0: beta length mismatch");
  if (!(p > 1.0)) throw std::invalid_argument("estimate_sigma0: requires p > 1");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("estimate_sigma0: tau outside (0,1)");

  const double T = static_cast<double>(data.rows());
  const LossSpec spec{tau, p};
  const Eigen::VectorXd res = data.y - data.X * beta_hat;
  double mean = 0.0;
  for (Eigen::Index t = 0; t < res.size(); ++t) mean += psi(res[t], spec, floor);
  mean /= T;

  const Eigen::MatrixXd gram = data.X.transpose() * data.X / T;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("estimate_sigma0: singular X'X/T");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(gram.rows(), gram.cols()));
  inv = 0.5 * (inv + inv.transpose()).eval();

  CovarianceEstimate out;
  out.psi_mean = mean;
  out.gram_inverse = inv;
  out.sigma0 = tau * (1.0 - tau) / (mean * mean) * inv;
  return out;
}

}  // namespace clpqr
