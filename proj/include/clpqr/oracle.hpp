#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "clpqr/data.hpp"

namespace clpqr {

// Brute-force reference solvers, linked into the tests only. Objective
// evaluation here is deliberately independent of the solver module.
struct OracleSolution {
  Eigen::VectorXd minimizer;
  double objective = 0.0;
  std::string method;
};

// Exhaustive evaluation on {lo, lo+step, ...} up to hi inclusive.
OracleSolution grid_minimize_1d(const std::function<double(double)>& f, double lo,
                                double hi, double step);

// Normal-equations least squares; minimizer is [intercept, beta] when
// with_intercept, objective is the residual sum of squares.
OracleSolution least_squares_closed(const Dataset& data, bool with_intercept);

// Exact composite L1 (check-loss) solve on tiny instances by enumerating
// vertex candidates: beta from every m-subset of row-difference hyperplanes
// (x_t - x_s)' beta = y_t - y_s (plus the beta_j = 0 axes for flat
// directions), b_k as the exact per-level check-loss minimizer given beta.
// Minimizer layout is [b_1..b_K, beta]; objective is (1/T)-scaled.
OracleSolution exact_composite_l1_small(const Dataset& data, const Eigen::VectorXd& taus,
                                        int max_T = 14, int max_m = 3);

}  // namespace clpqr
