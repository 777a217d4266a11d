#include "clpqr/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace clpqr {

OracleSolution grid_minimize_1d(const std::function<double(double)>& f, double lo,
                                double hi, double step) {
  if (!(lo < hi)) throw std::invalid_argument("grid_minimize_1d: lo >= hi");
  if (!(step > 0.0)) throw std::invalid_argument("grid_minimize_1d: step <= 0");
  double best_x = lo, best_f = f(lo);
  if (!std::isfinite(best_f)) throw std::runtime_error("grid_minimize_1d: non-finite value");
  const long n = static_cast<long>((hi - lo) / step);
  for (long i = 1; i <= n + 1; ++i) {
    const double x = std::min(lo + i * step, hi);
    const double v = f(x);
    if (!std::isfinite(v)) throw std::runtime_error("grid_minimize_1d: non-finite value");
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
    if (x == hi) break;
  }
  OracleSolution out;
  out.minimizer.resize(1);
  out.minimizer[0] = best_x;
  out.objective = best_f;
  out.method = "grid_1d";
  return out;
}

OracleSolution least_squares_closed(const Dataset& data, bool with_intercept) {
  data.validate();
  Eigen::MatrixXd A;
  if (with_intercept) {
    A.resize(data.rows(), data.cols() + 1);
    A.col(0).setOnes();
    A.rightCols(data.cols()) = data.X;
  } else {
    A = data.X;
  }
  const Eigen::MatrixXd gram = A.transpose() * A;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) throw std::runtime_error("least_squares_closed: singular Gram");
  OracleSolution out;
  out.minimizer = lu.solve(A.transpose() * data.y);
  out.objective = (data.y - A * out.minimizer).squaredNorm();
  out.method = "least_squares";
  return out;
}

namespace {

double check_loss(double s, double tau) { return (s < 0.0 ? 1.0 - tau : tau) * std::fabs(s); }

double composite_l1_objective(const Dataset& data, const Eigen::VectorXd& taus,
                              const Eigen::VectorXd& b, const Eigen::VectorXd& beta) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < taus.size(); ++k)
    for (Eigen::Index t = 0; t < data.rows(); ++t)
      total += check_loss(data.y[t] - b[k] - data.X.row(t).dot(beta), taus[k]);
  return total / static_cast<double>(data.rows());
}

}  // namespace

OracleSolution exact_composite_l1_small(const Dataset& data, const Eigen::VectorXd& taus,
                                        int max_T, int max_m) {
  data.validate();
  const int T = static_cast<int>(data.rows());
  const int m = static_cast<int>(data.cols());
  const int K = static_cast<int>(taus.size());
  if (T > max_T || m > max_m || K > 3)
    throw std::invalid_argument("exact_composite_l1_small: instance too large");

  // Constraint pool: one row per candidate hyperplane a' beta = c.
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  for (int t = 0; t < T; ++t)
    for (int s = t + 1; s < T; ++s) {
      normals.push_back(data.X.row(t) - data.X.row(s));
      offsets.push_back(data.y[t] - data.y[s]);
    }
  for (int j = 0; j < m; ++j) {
    normals.push_back(Eigen::VectorXd::Unit(m, j));
    offsets.push_back(0.0);
  }
  const int P = static_cast<int>(normals.size());

  OracleSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  best.method = "exact_composite_l1";

  std::vector<int> idx(m);
  for (int j = 0; j < m; ++j) idx[j] = j;
  Eigen::MatrixXd A(m, m);
  Eigen::VectorXd c(m);
  std::vector<double> residuals(T);
  for (;;) {
    for (int j = 0; j < m; ++j) {
      A.row(j) = normals[idx[j]];
      c[j] = offsets[idx[j]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      const Eigen::VectorXd beta = lu.solve(c);
      for (int t = 0; t < T; ++t) residuals[t] = data.y[t] - data.X.row(t).dot(beta);
      std::sort(residuals.begin(), residuals.end());
      Eigen::VectorXd b(K);
      for (int k = 0; k < K; ++k) {
        long r = static_cast<long>(std::ceil(taus[k] * T));
        r = std::max<long>(1, std::min<long>(r, T));
        b[k] = residuals[r - 1];
      }
      const double obj = composite_l1_objective(data, taus, b, beta);
      if (obj < best.objective) {
        best.objective = obj;
        best.minimizer.resize(K + m);
        best.minimizer.head(K) = b;
        best.minimizer.tail(m) = beta;
      }
    }
    // next m-combination of P
    int pos = m - 1;
    while (pos >= 0 && idx[pos] == P - m + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (!std::isfinite(best.objective))
    throw std::runtime_error("exact_composite_l1_small: no non-degenerate candidate");
  return best;
}

}  // namespace clpqr
