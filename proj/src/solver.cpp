#include "clpqr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "clpqr/loss.hpp"

namespace clpqr {

namespace {

void validate_taus(const Eigen::VectorXd& taus) {
  if (taus.size() < 1) throw std::invalid_argument("taus: empty");
  for (Eigen::Index k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0 && taus[k] < 1.0)) throw std::invalid_argument("taus: outside (0,1)");
    if (k > 0 && !(taus[k] > taus[k - 1]))
      throw std::invalid_argument("taus: not strictly increasing");
  }
}

// Type-7 (linear interpolation) sample quantile.
double sample_quantile(Eigen::VectorXd sorted, double tau) {
  const Eigen::Index n = sorted.size();
  const double h = (static_cast<double>(n) - 1.0) * tau;
  const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(h), n - 1);
  const double frac = h - static_cast<double>(i);
  if (i + 1 >= n) return sorted[n - 1];
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

}  // namespace

double objective(const Dataset& data, const Eigen::VectorXd& taus, double p,
                 const Eigen::VectorXd& b, const Eigen::VectorXd& beta,
                 const PenaltyWeights& weights) {
  data.validate();
  validate_taus(taus);
  if (b.size() != taus.size()) throw std::invalid_argument("objective: b/taus length mismatch");
  if (beta.size() != data.cols()) throw std::invalid_argument("objective: beta length mismatch");
  weights.validate(data.cols());
  if (!(p >= 1.0)) throw std::invalid_argument("objective: p < 1");

  const double T = static_cast<double>(data.rows());
  const Eigen::ArrayXd res = (data.y - data.X * beta).array();
  double loss = 0.0;
  for (Eigen::Index k = 0; k < taus.size(); ++k)
    loss += eta_sum(res - b[k], taus[k], p);
  return loss / T + weights.w.dot(beta.cwiseAbs());
}

double coordinate_gradient(const Dataset& data, const Eigen::VectorXd& taus, double p,
                           const Eigen::VectorXd& b, const Eigen::VectorXd& beta, int i) {
  data.validate();
  validate_taus(taus);
  const int K = static_cast<int>(taus.size());
  const int m = static_cast<int>(data.cols());
  if (i < 0 || i >= K + m) throw std::out_of_range("coordinate_gradient: index out of range");

  const Eigen::ArrayXd res = (data.y - data.X * beta).array();
  Eigen::ArrayXd buf(res.size());
  if (i < K) {
    phi_into(res - b[i], taus[i], p, buf);
    return -buf.sum();
  }
  const int j = i - K;
  double g = 0.0;
  for (int k = 0; k < K; ++k) {
    phi_into(res - b[k], taus[k], p, buf);
    g -= buf.matrix().dot(data.X.col(j));
  }
  return g;
}

CompositeFit fit(const Dataset& data, const Eigen::VectorXd& taus, double p,
                 const PenaltyWeights& weights, const SolverConfig& config,
                 std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> init,
                 bool with_intercepts) {
  data.validate();
  validate_taus(taus);
  weights.validate(data.cols());
  config.validate();
  if (!(p >= 1.0)) throw std::invalid_argument("fit: p < 1");

  const int K = static_cast<int>(taus.size());
  const int m = static_cast<int>(data.cols());
  const Eigen::Index T = data.rows();
  const double Td = static_cast<double>(T);

  CompositeFit out;
  if (init) {
    if (init->first.size() != K || init->second.size() != m)
      throw std::invalid_argument("fit: init dimension mismatch");
    out.b = init->first;
    out.beta = init->second;
  } else {
    out.b = Eigen::VectorXd::Zero(K);
    out.beta = Eigen::VectorXd::Zero(m);
    if (with_intercepts) {
      Eigen::VectorXd sorted = data.y;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      for (int k = 0; k < K; ++k) out.b[k] = sample_quantile(sorted, taus[k]);
    }
  }
  if (!with_intercepts) out.b.setZero();

  Eigen::VectorXd col_sq(m);
  for (int j = 0; j < m; ++j) {
    col_sq[j] = data.X.col(j).squaredNorm();
    if (col_sq[j] == 0.0) out.frozen_columns.push_back(j);
  }

  Eigen::ArrayXd res = (data.y - data.X * out.beta).array();
  Eigen::ArrayXd buf(T);

  const bool shrink_steps = p < 1.5;
  const auto intercept_grad = [&](int k) {
    phi_into(res - out.b[k], taus[k], p, buf);
    return -buf.sum();
  };
  const auto coef_grad = [&](int j) {
    double g = 0.0;
    for (int k = 0; k < K; ++k) {
      phi_into(res - out.b[k], taus[k], p, buf);
      g -= buf.matrix().dot(data.X.col(j));
    }
    return g;
  };

  for (out.cycles = 1; out.cycles <= config.max_cycles; ++out.cycles) {
    const double cycle_scale =
        (shrink_steps && config.c3_per_cycle) ? std::pow(config.c3, out.cycles - 1) : 1.0;
    double max_change = 0.0;

    if (with_intercepts) {
      for (int k = 0; k < K; ++k) {
        double S = config.c1 * cycle_scale;
        const double start = out.b[k];
        for (int d = 0; d < config.inner_iters; ++d) {
          const double g = intercept_grad(k);
          const double next = out.b[k] - g / (Td * S);
          const double delta = next - out.b[k];
          out.b[k] = next;
          if (std::fabs(delta) < config.inner_tol) break;
          if (shrink_steps && !config.c3_per_cycle) S *= config.c3;
        }
        max_change = std::max(max_change, std::fabs(out.b[k] - start));
      }
    }

    for (int j = 0; j < m; ++j) {
      if (col_sq[j] == 0.0) continue;
      double S = config.c2 * col_sq[j] / Td * cycle_scale;
      const double start = out.beta[j];
      for (int d = 0; d < config.inner_iters; ++d) {
        const double g = coef_grad(j);
        const double next = soft_threshold(out.beta[j] - g / (Td * S), weights.w[j] / S);
        const double delta = next - out.beta[j];
        if (delta != 0.0) {
          res -= delta * data.X.col(j).array();
          out.beta[j] = next;
        }
        if (std::fabs(delta) < config.inner_tol) break;
        if (shrink_steps && !config.c3_per_cycle) S *= config.c3;
      }
      max_change = std::max(max_change, std::fabs(out.beta[j] - start));
    }

    if (max_change <= config.outer_tol) {
      out.converged = true;
      break;
    }
  }
  out.cycles = std::min(out.cycles, config.max_cycles);
  out.objective = objective(data, taus, p, out.b, out.beta, weights);
  return out;
}

}  // namespace clpqr
