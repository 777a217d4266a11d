#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "clpqr/data.hpp"
#include "clpqr/distributions.hpp"
#include "clpqr/estimators.hpp"

namespace clpqr {

// Sparse linear model of the simulation study: beta* = (3,1.5,0,0,2,0,0,0),
// AR(1)-style predictor covariance 0.5^{|i-j|}, 100 train + 100 tune rows.
struct DGPConfig {
  Eigen::VectorXd beta_star;
  Eigen::MatrixXd predictor_cov;
  ErrorDistribution error;
  int T_train = 100;
  int T_tune = 100;

  explicit DGPConfig(ErrorDistribution err);

  std::vector<int> true_support() const;
  void validate() const;
};

Dataset generate(const DGPConfig& dgp, int T, std::uint64_t seed);

// (beta_hat - beta*)' predictor_cov (beta_hat - beta*).
double estimation_error(const Eigen::VectorXd& beta_hat, const DGPConfig& dgp);

// (correctly kept, incorrectly kept) nonzero counts; zero-ness is exact.
std::pair<int, int> selection_counts(const Eigen::VectorXd& beta_hat,
                                     const std::vector<int>& true_support);

struct ReplicationSummary {
  double ee_mean = 0.0;
  Eigen::VectorXd ee_values;  // NaN where the replicate failed
  double anc = 0.0;
  double anic = 0.0;
  std::vector<std::vector<int>> supports;
  std::vector<double> lambdas;
  int failures = 0;
};

// Seeded replication batch: per replicate, fresh train/tune draws, lambda
// tuning, EE and selection metrics. Replicate failures are recorded, not
// fatal. Deterministic in (dgp, p, K, grid, reps, master_seed, config)
// regardless of thread count.
ReplicationSummary run_replications(const DGPConfig& dgp, double p, int K,
                                    const Eigen::VectorXd& lambda_grid, int reps,
                                    std::uint64_t master_seed, const SolverConfig& config,
                                    int n_threads = 0);

}  // namespace clpqr
