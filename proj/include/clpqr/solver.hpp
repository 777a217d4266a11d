#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "clpqr/data.hpp"

namespace clpqr {

// CCPA constants and stopping rules. c1/c2 are the inverse-step scales of
// Remark 5.1; c3 shrinks the step during the inner proximal loop when
// p < 1.5 (set c3_per_cycle to apply it once per outer cycle instead).
struct SolverConfig {
  double c1 = 1.6;
  double c2 = 10.0;
  double c3 = 1.0 / 0.9;
  int inner_iters = 10;
  double inner_tol = 1e-8;
  double outer_tol = 1e-7;
  int max_cycles = 5000;
  bool c3_per_cycle = false;

  void validate() const {
    if (!(c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("SolverConfig: c1,c2 must be positive");
    if (!(c3 >= 1.0)) throw std::invalid_argument("SolverConfig: c3 must be >= 1");
    if (inner_iters < 1 || max_cycles < 1)
      throw std::invalid_argument("SolverConfig: iteration caps must be >= 1");
    if (!(inner_tol > 0.0 && outer_tol > 0.0))
      throw std::invalid_argument("SolverConfig: tolerances must be positive");
  }
};

// Per-coefficient L1 penalty weights; intercepts are never penalized.
struct PenaltyWeights {
  Eigen::VectorXd w;

  static PenaltyWeights zeros(Eigen::Index m) { return {Eigen::VectorXd::Zero(m)}; }

  void validate(Eigen::Index m) const {
    if (w.size() != m) throw std::invalid_argument("PenaltyWeights: length mismatch");
    if ((w.array() < 0.0).any()) throw std::invalid_argument("PenaltyWeights: negative weight");
  }
};

struct CompositeFit {
  Eigen::VectorXd b;     // K intercepts
  Eigen::VectorXd beta;  // m shared coefficients
  double objective = 0.0;
  int cycles = 0;
  bool converged = false;
  std::vector<int> frozen_columns;  // zero-norm predictor columns, left at init
};

// (1/T) sum_k sum_t eta_{tau_k,p}(y_t - b_k - x_t' beta) + sum_j w_j |beta_j|.
double objective(const Dataset& data, const Eigen::VectorXd& taus, double p,
                 const Eigen::VectorXd& b, const Eigen::VectorXd& beta,
                 const PenaltyWeights& weights);

inline double soft_threshold(double v, double u) {
  const double a = std::fabs(v) - u;
  return a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
}

// Derivative of the unscaled O_{T,K} with respect to coordinate i, with
// alpha = (b_1..b_K, beta_1..beta_m) and i in [0, K+m).
double coordinate_gradient(const Dataset& data, const Eigen::VectorXd& taus, double p,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& beta, int i);

// Cyclic coordinate descent with a proximal-gradient inner loop (CCPA).
// Intercepts use inverse step c1, coefficient j uses c2 ||X_j||^2 / T; when
// with_intercepts is false the b_k stay fixed at zero (near quantile
// regression folds the intercept into the design).
CompositeFit fit(const Dataset& data, const Eigen::VectorXd& taus, double p,
                 const PenaltyWeights& weights, const SolverConfig& config,
                 std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> init = {},
                 bool with_intercepts = true);

}  // namespace clpqr
