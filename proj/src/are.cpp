#include "clpqr/are.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "clpqr/loss.hpp"
#include "clpqr/quadrature.hpp"

namespace clpqr {

namespace {

double mixture_are_cqr(double rho) {
  const double bracket = (1.0 - rho) * (1.0 - rho) + 1.0 / rho +
                         2.0 * std::sqrt(2.0) * rho * (1.0 - rho) /
                             std::sqrt(1.0 + std::pow(rho, 6.0));
  return 3.0 * (1.0 - rho + std::pow(rho, 7.0)) / M_PI * bracket * bracket;
}

double ged_are_cqr(double beta) {
  return std::exp(std::log(3.0) + 2.0 * std::log(beta) - std::log(4.0) / beta +
                  std::lgamma(3.0 / beta) - 3.0 * std::lgamma(1.0 / beta));
}

void require_moments_for_are(const ErrorDistribution& dist, double p) {
  if (!std::isfinite(dist.variance()))
    throw std::runtime_error("are: error variance is infinite for this family");
  if (2.0 * (p - 1.0) >= dist.max_finite_abs_moment())
    throw std::runtime_error("are: E|eps|^{2(p-1)} not finite for this family");
}

}  // namespace

AREResult are_cqr_closed(const ErrorDistribution& dist) {
  AREResult out;
  out.method = AREResult::Method::closed_form;
  switch (dist.family()) {
    case ErrorDistribution::Family::mixture_two_normals:
      out.value = mixture_are_cqr(dist.param1());
      return out;
    case ErrorDistribution::Family::ged:
      out.value = ged_are_cqr(dist.param2());
      return out;
    case ErrorDistribution::Family::normal:
      out.value = mixture_are_cqr(1.0);
      return out;
    default:
      throw std::invalid_argument("are_cqr_closed: no closed form for this family");
  }
}

AREResult are_cqr_generic(const ErrorDistribution& dist, double tol) {
  const double sigma2 = dist.variance();
  if (!std::isfinite(sigma2))
    throw std::runtime_error("are_cqr_generic: error variance is infinite");
  const double ef = dist.expect([&](double x) { return dist.density(x); }, tol);
  AREResult out;
  out.method = AREResult::Method::closed_form;
  out.value = 12.0 * sigma2 * ef * ef;
  return out;
}

LpQuantileTransform LpQuantileTransform::build(const ErrorDistribution& dist, double p,
                                               int grid_size) {
  if (grid_size < 8) throw std::invalid_argument("LpQuantileTransform: grid too small");
  LpQuantileTransform t;
  t.taus_.resize(grid_size);
  t.values_.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    t.taus_[i] = 0.5 * (1.0 - std::cos(M_PI * (i + 0.5) / grid_size));
    t.values_[i] = lp_quantile_dist(dist, t.taus_[i], p, 1e-9).value;
  }
  // Fritsch-Carlson monotone cubic slopes.
  const int n = grid_size;
  Eigen::VectorXd h(n - 1), d(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    h[i] = t.taus_[i + 1] - t.taus_[i];
    d[i] = (t.values_[i + 1] - t.values_[i]) / h[i];
    if (!(d[i] > 0.0))
      throw std::runtime_error("LpQuantileTransform: tabulated values not increasing");
  }
  t.slopes_.resize(n);
  t.slopes_[0] = d[0];
  t.slopes_[n - 1] = d[n - 2];
  for (int i = 1; i + 1 < n; ++i)
    t.slopes_[i] = (h[i - 1] + h[i]) > 0.0
                       ? 3.0 * (h[i - 1] + h[i]) / ((2.0 * h[i] + h[i - 1]) / d[i - 1] +
                                                    (h[i] + 2.0 * h[i - 1]) / d[i])
                       : 0.0;
  return t;
}

double LpQuantileTransform::operator()(double u) const {
  const int n = static_cast<int>(taus_.size());
  if (u <= taus_[0]) return values_[0];
  if (u >= taus_[n - 1]) return values_[n - 1];
  int lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (taus_[mid] <= u ? lo : hi) = mid;
  }
  const double h = taus_[lo + 1] - taus_[lo];
  const double s = (u - taus_[lo]) / h;
  const double y0 = values_[lo], y1 = values_[lo + 1];
  const double m0 = slopes_[lo] * h, m1 = slopes_[lo + 1] * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 +
         (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1;
}

namespace {

// E_eps |u - I(eps < a)| |eps - a|^{p-2} computed exactly given a. A plain
// nested sample mean cannot see this integral: for p near 1 most of its mass
// sits at scales |eps - a| below machine-reachable sampling resolution. The
// substitution t = |x - a|^{p-1} removes the cusp, leaving
// (1/(p-1)) integral of f(a +- t^{1/(p-1)}) dt with a bounded integrand.
double psi_like_expectation(const ErrorDistribution& dist, double p, double a,
                            double u) {
  if (p == 2.0) {
    const double F = dist.cdf(a);
    return u * (1.0 - F) + (1.0 - u) * F;
  }
  const auto [L, U] = dist.bounds(1e-14);
  const double q = 1.0 / (p - 1.0);
  double upper = 0.0, lower = 0.0;
  if (U > a)
    upper = q * integrate(
                    [&](double t) { return dist.density(a + std::pow(t, q)); }, 0.0,
                    std::pow(U - a, p - 1.0), 1e-9);
  if (a > L)
    lower = q * integrate(
                    [&](double t) { return dist.density(a - std::pow(t, q)); }, 0.0,
                    std::pow(a - L, p - 1.0), 1e-9);
  return u * upper + (1.0 - u) * lower;
}

}  // namespace

LimitMcMoments limit_mc_moments(const ErrorDistribution& dist, double p, long n_outer,
                                std::uint64_t seed, int n_inner) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("limit_mc_moments: p outside (1,2]");
  if (n_outer < 1000) throw std::invalid_argument("limit_mc_moments: n too small (< 1000)");
  if (n_inner < 1) throw std::invalid_argument("limit_mc_moments: n_inner < 1");
  if (p - 1.0 >= dist.max_finite_abs_moment())
    throw std::runtime_error("limit_mc_moments: E|eps|^{p-1} not finite");

  const LpQuantileTransform inv = LpQuantileTransform::build(dist, p);

  constexpr int kChunks = 64;
  double sum_n = 0.0, sum_d = 0.0, sum_nn = 0.0, sum_dd = 0.0, sum_nd = 0.0;
  long done = 0;
  Eigen::ArrayXd eps(n_inner), pow_b(n_inner), pow_c(n_inner);
  for (int c = 0; c < kChunks; ++c) {
    const long lo = n_outer * c / kChunks, hi = n_outer * (c + 1) / kChunks;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    double cn = 0.0, cd = 0.0, cnn = 0.0, cdd = 0.0, cnd = 0.0;
    for (long i = lo; i < hi; ++i) {
      const double ua = rng.uniform(), ub = rng.uniform(), uc = rng.uniform();
      const double ea = inv(ua), eb = inv(ub), ec = inv(uc);
      for (int j = 0; j < n_inner; ++j) eps[j] = dist.sample_one(rng);

      const double di = psi_like_expectation(dist, p, ea, ua);

      pow_b = ((p - 1.0) * (eps - eb).abs().log()).exp();
      pow_c = ((p - 1.0) * (eps - ec).abs().log()).exp();
      const double ni = ((ub - (eps < eb).cast<double>()) *
                         (uc - (eps < ec).cast<double>()) * pow_b * pow_c)
                            .mean();

      cn += ni;
      cd += di;
      cnn += ni * ni;
      cdd += di * di;
      cnd += ni * di;
    }
    sum_n += cn;
    sum_d += cd;
    sum_nn += cnn;
    sum_dd += cdd;
    sum_nd += cnd;
    done += hi - lo;
  }

  LimitMcMoments m;
  m.n_outer = done;
  const double n = static_cast<double>(done);
  m.numerator_mean = sum_n / n;
  m.denominator_mean = sum_d / n;
  m.var_num = (sum_nn / n - m.numerator_mean * m.numerator_mean) / n;
  m.var_den = (sum_dd / n - m.denominator_mean * m.denominator_mean) / n;
  m.cov = (sum_nd / n - m.numerator_mean * m.denominator_mean) / n;
  return m;
}

AREResult are_clpqr_mc(const ErrorDistribution& dist, double p, long n_outer,
                       std::uint64_t seed, int n_inner) {
  require_moments_for_are(dist, p);
  const double sigma2 = dist.variance();
  const LimitMcMoments m = limit_mc_moments(dist, p, n_outer, seed, n_inner);
  const double c = sigma2 * (p - 1.0) * (p - 1.0);
  const double D = m.denominator_mean, N = m.numerator_mean;
  AREResult out;
  out.method = AREResult::Method::monte_carlo;
  out.n_samples = m.n_outer;
  out.value = c * D * D / N;
  const double gd = 2.0 * c * D / N;
  const double gn = -c * D * D / (N * N);
  out.std_error =
      std::sqrt(std::max(0.0, gd * gd * m.var_den + gn * gn * m.var_num +
                                  2.0 * gd * gn * m.cov));
  return out;
}

AREResult thm22_limit_factor_mc(const ErrorDistribution& dist, double p, long n_outer,
                                std::uint64_t seed, int n_inner) {
  const LimitMcMoments m = limit_mc_moments(dist, p, n_outer, seed, n_inner);
  const double q = (p - 1.0) * (p - 1.0);
  const double D = m.denominator_mean, N = m.numerator_mean;
  AREResult out;
  out.method = AREResult::Method::monte_carlo;
  out.n_samples = m.n_outer;
  out.value = N / (q * D * D);
  const double gn = 1.0 / (q * D * D);
  const double gd = -2.0 * N / (q * D * D * D);
  out.std_error =
      std::sqrt(std::max(0.0, gn * gn * m.var_num + gd * gd * m.var_den +
                                  2.0 * gn * gd * m.cov));
  return out;
}

double finite_k_variance_factor(const ErrorDistribution& dist, double p, int K, long n,
                                std::uint64_t seed) {
  if (K < 1) throw std::invalid_argument("finite_k_variance_factor: K < 1");
  if (n < 1000) throw std::invalid_argument("finite_k_variance_factor: n too small (< 1000)");
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("finite_k_variance_factor: p outside (1,2]");
  if (2.0 * (p - 1.0) >= dist.max_finite_abs_moment())
    throw std::runtime_error("finite_k_variance_factor: E|eps|^{2(p-1)} not finite");

  std::vector<LossSpec> specs(K);
  std::vector<double> bstar(K);
  for (int k = 0; k < K; ++k) {
    specs[k] = {static_cast<double>(k + 1) / (K + 1), p};
    bstar[k] = lp_quantile_dist(dist, specs[k].tau, p, 1e-9).value;
  }

  constexpr int kChunks = 64;
  double sum_num = 0.0, sum_den = 0.0;
  for (int c = 0; c < kChunks; ++c) {
    const long lo = n * c / kChunks, hi = n * (c + 1) / kChunks;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
    double cn = 0.0, cd = 0.0;
    for (long i = lo; i < hi; ++i) {
      const double e = dist.sample_one(rng);
      double s = 0.0, ps = 0.0;
      for (int k = 0; k < K; ++k) {
        s += phi(e - bstar[k], specs[k]);
        ps += psi(e - bstar[k], specs[k]);
      }
      cn += s * s;
      cd += ps;
    }
    sum_num += cn;
    sum_den += cd;
  }
  const double nd = static_cast<double>(n);
  const double num = sum_num / nd;
  const double den = sum_den / nd;
  return num / (den * den);
}

}  // namespace clpqr
