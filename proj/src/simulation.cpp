#include "clpqr/simulation.hpp"

#include <Eigen/Cholesky>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "clpqr/rng.hpp"

namespace clpqr {

DGPConfig::DGPConfig(ErrorDistribution err) : error(std::move(err)) {
  beta_star.resize(8);
  beta_star << 3.0, 1.5, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0;
  predictor_cov.resize(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) predictor_cov(i, j) = std::pow(0.5, std::abs(i - j));
}

std::vector<int> DGPConfig::true_support() const {
  std::vector<int> support;
  for (Eigen::Index j = 0; j < beta_star.size(); ++j)
    if (beta_star[j] != 0.0) support.push_back(static_cast<int>(j));
  return support;
}

void DGPConfig::validate() const {
  if (beta_star.size() != predictor_cov.rows() || predictor_cov.rows() != predictor_cov.cols())
    throw std::invalid_argument("DGPConfig: dimension mismatch");
  if (T_train < 1 || T_tune < 1) throw std::invalid_argument("DGPConfig: split sizes < 1");
  if (!predictor_cov.isApprox(predictor_cov.transpose()))
    throw std::invalid_argument("DGPConfig: predictor_cov not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(predictor_cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("DGPConfig: predictor_cov not positive definite");
}

Dataset generate(const DGPConfig& dgp, int T, std::uint64_t seed) {
  dgp.validate();
  if (T < 1) throw std::invalid_argument("generate: T < 1");
  const Eigen::Index m = dgp.beta_star.size();
  const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(dgp.predictor_cov).matrixL();

  Rng xrng(mix_seed(seed, 1));
  Eigen::MatrixXd Z(T, m);
  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index j = 0; j < m; ++j) Z(t, j) = xrng.normal();

  Dataset data;
  data.X = Z * L.transpose();
  data.y = data.X * dgp.beta_star + dgp.error.sample(T, mix_seed(seed, 2));
  return data;
}

double estimation_error(const Eigen::VectorXd& beta_hat, const DGPConfig& dgp) {
  if (beta_hat.size() != dgp.beta_star.size())
    throw std::invalid_argument("estimation_error: dimension mismatch");
  const Eigen::VectorXd d = beta_hat - dgp.beta_star;
  return d.dot(dgp.predictor_cov * d);
}

std::pair<int, int> selection_counts(const Eigen::VectorXd& beta_hat,
                                     const std::vector<int>& true_support) {
  std::vector<bool> in_support(beta_hat.size(), false);
  for (int j : true_support) {
    if (j < 0 || j >= beta_hat.size())
      throw std::invalid_argument("selection_counts: index out of range");
    in_support[j] = true;
  }
  int nc = 0, nic = 0;
  for (Eigen::Index j = 0; j < beta_hat.size(); ++j)
    if (beta_hat[j] != 0.0) (in_support[j] ? nc : nic) += 1;
  return {nc, nic};
}

ReplicationSummary run_replications(const DGPConfig& dgp, double p, int K,
                                    const Eigen::VectorXd& lambda_grid, int reps,
                                    std::uint64_t master_seed, const SolverConfig& config,
                                    int n_threads) {
  dgp.validate();
  if (reps < 1) throw std::invalid_argument("run_replications: reps < 1");
  const std::vector<int> truth = dgp.true_support();

  struct RepResult {
    double ee = std::numeric_limits<double>::quiet_NaN();
    double lambda = 0.0;
    int nc = 0, nic = 0;
    std::vector<int> support;
    bool ok = false;
  };
  std::vector<RepResult> results(reps);

  const auto run_one = [&](int r) {
    const std::uint64_t seed_r = mix_seed(master_seed, static_cast<std::uint64_t>(r));
    RepResult& out = results[r];
    try {
      const Dataset train = generate(dgp, dgp.T_train, mix_seed(seed_r, 1));
      const Dataset tune = generate(dgp, dgp.T_tune, mix_seed(seed_r, 2));
      auto [lambda, ofit] = tune_lambda(train, tune, K, p, lambda_grid, config);
      out.ee = estimation_error(ofit.fit.beta, dgp);
      out.lambda = lambda;
      std::tie(out.nc, out.nic) = selection_counts(ofit.fit.beta, truth);
      out.support = ofit.support;
      out.ok = true;
    } catch (const std::exception&) {
      out.ok = false;
    }
  };

  int threads = n_threads > 0 ? n_threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, reps));
  if (threads == 1) {
    for (int r = 0; r < reps; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run_one(r);
      });
    for (auto& th : pool) th.join();
  }

  ReplicationSummary summary;
  summary.ee_values.resize(reps);
  double ee_sum = 0.0, nc_sum = 0.0, nic_sum = 0.0;
  int ok_count = 0;
  for (int r = 0; r < reps; ++r) {
    const RepResult& res = results[r];
    summary.ee_values[r] = res.ee;
    summary.supports.push_back(res.support);
    summary.lambdas.push_back(res.lambda);
    if (!res.ok) {
      ++summary.failures;
      continue;
    }
    ee_sum += res.ee;
    nc_sum += res.nc;
    nic_sum += res.nic;
    ++ok_count;
  }
  if (ok_count > 0) {
    summary.ee_mean = ee_sum / ok_count;
    summary.anc = nc_sum / ok_count;
    summary.anic = nic_sum / ok_count;
  }
  return summary;
}

}  // namespace clpqr
