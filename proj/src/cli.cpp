#include "clpqr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clpqr/are.hpp"
#include "clpqr/csv.hpp"
#include "clpqr/distributions.hpp"
#include "clpqr/estimators.hpp"
#include "clpqr/json_io.hpp"
#include "clpqr/loss.hpp"
#include "clpqr/simulation.hpp"

namespace clpqr {

namespace {

using nlohmann::json;

struct SolverOpts {
  SolverConfig config;
  void attach(CLI::App* cmd) {
    cmd->add_option("--c1", config.c1, "intercept inverse-step scale");
    cmd->add_option("--c2", config.c2, "coefficient inverse-step scale");
    cmd->add_option("--c3", config.c3, "inner step shrink factor for p < 1.5");
    cmd->add_option("--inner-iters", config.inner_iters, "max proximal iterations per coordinate");
    cmd->add_option("--inner-tol", config.inner_tol, "inner stop on coordinate change");
    cmd->add_option("--outer-tol", config.outer_tol, "outer stop on max coordinate change");
    cmd->add_option("--max-cycles", config.max_cycles, "outer cycle cap");
    cmd->add_flag("--c3-per-cycle", config.c3_per_cycle, "apply c3 once per outer cycle");
  }
  json to_json() const {
    return {{"c1", config.c1},
            {"c2", config.c2},
            {"c3", config.c3},
            {"c3_per_cycle", config.c3_per_cycle},
            {"inner_iters", config.inner_iters},
            {"inner_tol", config.inner_tol},
            {"max_cycles", config.max_cycles},
            {"outer_tol", config.outer_tol}};
  }
};

struct PreprocOpts {
  PreprocessOptions options;
  std::string exclude_raw;
  void attach(CLI::App* cmd) {
    cmd->add_flag("--standardize", options.standardize, "center/scale response and predictors");
    cmd->add_flag("--add-squares", options.add_squares, "append squared predictors");
    cmd->add_flag("!--no-restandardize-squares", options.restandardize_squares,
                  "leave squared columns unscaled");
    cmd->add_option("--exclude-cols", exclude_raw,
                    "comma-separated columns excluded from standardization/squaring");
  }
  const PreprocessOptions& resolve() {
    options.exclude_columns.clear();
    std::stringstream ss(exclude_raw);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) options.exclude_columns.push_back(item);
    return options;
  }
};

std::vector<double> parse_triplet(const std::string& raw, const std::string& what) {
  std::vector<double> parts;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3) throw std::invalid_argument(what + ": expected lo:hi:n");
  return parts;
}

Eigen::VectorXd parse_lambda_grid(const std::string& raw) {
  const auto parts = parse_triplet(raw, "--lambda-grid");
  const double lo = parts[0], hi = parts[1];
  const int n = static_cast<int>(parts[2]);
  if (!(lo > 0.0 && hi >= lo && n >= 1))
    throw std::invalid_argument("--lambda-grid: need 0 < lo <= hi and n >= 1");
  Eigen::VectorXd grid(n);
  for (int i = 0; i < n; ++i)
    grid[i] = n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1.0));
  return grid;
}

ErrorDistribution parse_error_spec(const std::string& spec) {
  if (spec == "e1") return ErrorDistribution::normal(9.0);
  if (spec == "e2") return ErrorDistribution::student_t(3.0);
  if (spec == "e3") return ErrorDistribution::cauchy();
  if (spec == "e4") return ErrorDistribution::ged(1.0, 4.0);
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw std::invalid_argument("--error: empty spec");
  const auto arg = [&](std::size_t i) {
    if (i >= parts.size()) throw std::invalid_argument("--error: missing parameter in " + spec);
    return std::stod(parts[i]);
  };
  if (parts[0] == "normal") return ErrorDistribution::normal(arg(1));
  if (parts[0] == "t") return ErrorDistribution::student_t(arg(1));
  if (parts[0] == "cauchy") return ErrorDistribution::cauchy();
  if (parts[0] == "ged") return ErrorDistribution::ged(arg(1), arg(2));
  if (parts[0] == "mixture") return ErrorDistribution::mixture_two_normals(arg(1));
  throw std::invalid_argument("--error: unknown family " + parts[0]);
}

struct DistOpts {
  std::string dist = "normal";
  double var = 1.0, df = 3.0, alpha = 1.0, beta = 2.0, rho = 0.5;
  void attach(CLI::App* cmd) {
    cmd->add_option("--dist", dist, "normal|t|cauchy|ged|mixture");
    cmd->add_option("--var", var, "normal variance");
    cmd->add_option("--df", df, "t degrees of freedom");
    cmd->add_option("--alpha", alpha, "GED scale");
    cmd->add_option("--beta", beta, "GED shape");
    cmd->add_option("--rho", rho, "mixture parameter");
  }
  ErrorDistribution resolve() const {
    if (dist == "normal") return ErrorDistribution::normal(var);
    if (dist == "t") return ErrorDistribution::student_t(df);
    if (dist == "cauchy") return ErrorDistribution::cauchy();
    if (dist == "ged") return ErrorDistribution::ged(alpha, beta);
    if (dist == "mixture") return ErrorDistribution::mixture_two_normals(rho);
    throw std::invalid_argument("--dist: unknown family " + dist);
  }
  json to_json() const {
    json j{{"family", dist}};
    if (dist == "normal") j["var"] = var;
    if (dist == "t") j["df"] = df;
    if (dist == "ged") {
      j["alpha"] = alpha;
      j["beta"] = beta;
    }
    if (dist == "mixture") j["rho"] = rho;
    return j;
  }
};

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + output);
  out << text;
}

void emit_json(const std::string& output, const json& j) {
  std::ostringstream os;
  write_json(j, os);
  os << "\n";
  emit(output, os.str());
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i)));
  return rows;
}

json fit_to_json(const CompositeFit& f) {
  json j;
  j["b"] = vector_to_json(f.b);
  j["beta"] = vector_to_json(f.beta);
  j["converged"] = f.converged;
  j["cycles"] = f.cycles;
  j["frozen_columns"] = f.frozen_columns;
  j["objective"] = f.objective;
  return j;
}

json preprocessing_to_json(const PreprocessReport& r) {
  json j;
  j["column_names"] = r.column_names;
  j["constant_columns"] = r.constant_columns;
  j["means"] = r.means;
  j["response_mean"] = r.response_mean;
  j["response_scale"] = r.response_scale;
  j["scales"] = r.scales;
  return j;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ",";
    row += cells[i];
  }
  row += "\n";
  return row;
}

// ---- subcommand handlers ----

struct CommonFitArgs {
  std::string input, output, response;
  double p = 2.0;
  int k = 19;
  std::uint64_t seed = 0;
  SolverOpts solver;
  PreprocOpts preproc;
  void attach(CLI::App* cmd, bool with_k = true) {
    cmd->add_option("--input", input, "input CSV path")->required();
    cmd->add_option("--response", response, "response column name")->required();
    cmd->add_option("--output", output, "output path (default stdout)");
    cmd->add_option("--p", p, "loss exponent");
    if (with_k) cmd->add_option("--k", k, "number of composite levels");
    cmd->add_option("--seed", seed, "master seed");
    solver.attach(cmd);
    preproc.attach(cmd);
  }
};

int cmd_fit(CommonFitArgs& args, double lambda, double tau_single, bool has_tau) {
  LoadedData loaded = load_csv(args.input, args.response, args.preproc.resolve());
  const Dataset& data = loaded.data;
  Eigen::VectorXd taus;
  if (has_tau) {
    taus.resize(1);
    taus[0] = tau_single;
  } else {
    taus = equally_spaced_taus(args.k);
  }
  PenaltyWeights weights = PenaltyWeights::zeros(data.cols());
  if (lambda > 0.0) weights.w.setConstant(lambda / static_cast<double>(data.rows()));
  const CompositeFit f = fit(data, taus, args.p, weights, args.solver.config);

  json out;
  out["command"] = "fit";
  out["params"] = {{"input", args.input},   {"k", static_cast<int>(taus.size())},
                   {"lambda", lambda},      {"p", args.p},
                   {"response", args.response}, {"solver", args.solver.to_json()},
                   {"taus", vector_to_json(taus)}};
  out["results"] = fit_to_json(f);
  json support = json::array();
  for (Eigen::Index j = 0; j < f.beta.size(); ++j)
    if (f.beta[j] != 0.0) support.push_back(static_cast<int>(j));
  out["results"]["support"] = support;
  out["diagnostics"] = {{"preprocessing", preprocessing_to_json(loaded.report)}};
  out["seed"] = args.seed;
  emit_json(args.output, out);
  return 0;
}

Dataset subset_rows(const Dataset& data, const std::vector<int>& idx) {
  Dataset out;
  out.X.resize(idx.size(), data.cols());
  out.y.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.X.row(i) = data.X.row(idx[i]);
    out.y[i] = data.y[idx[i]];
  }
  out.column_names = data.column_names;
  return out;
}

double test_error(const Dataset& test, const CompositeFit& f, const std::string& metric,
                  double p) {
  const double shift = f.b.mean();
  const Eigen::ArrayXd err = (test.y - test.X * f.beta).array() - shift;
  if (metric == "l1") return err.abs().mean();
  if (metric == "l2") return err.square().mean();
  if (metric == "lp") return err.abs().pow(p).mean();
  throw std::invalid_argument("--test-metric: expected lp, l1 or l2");
}

int cmd_oracle(CommonFitArgs& args, double lambda, bool has_lambda,
               const std::string& grid_raw, const std::string& split_raw,
               const std::string& metric, const std::string& unpenalized_raw,
               double w_max) {
  LoadedData loaded = load_csv(args.input, args.response, args.preproc.resolve());
  const Dataset& data = loaded.data;
  const Eigen::VectorXd taus = equally_spaced_taus(args.k);
  const double T_all = static_cast<double>(data.rows());

  std::vector<std::string> unpenalized;
  {
    std::stringstream ss(unpenalized_raw);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) unpenalized.push_back(item);
  }
  const auto clear_unpenalized = [&](PenaltyWeights& w) {
    for (const auto& name : unpenalized) {
      const auto it = std::find(data.column_names.begin(), data.column_names.end(), name);
      if (it == data.column_names.end())
        throw DataError("--unpenalized-cols: column '" + name + "' not found");
      w.w[std::distance(data.column_names.begin(), it)] = 0.0;
    }
  };

  json out;
  out["command"] = "oracle";
  json params{{"input", args.input},   {"k", args.k},       {"p", args.p},
              {"response", args.response}, {"solver", args.solver.to_json()},
              {"w_max", w_max}};

  json results;
  if (!split_raw.empty()) {
    const auto parts = parse_triplet(split_raw, "--split");
    const int a = static_cast<int>(parts[0]), b = static_cast<int>(parts[1]),
              c = static_cast<int>(parts[2]);
    if (a < 1 || b < 1 || c < 0 || a + b + c > data.rows())
      throw std::invalid_argument("--split: sizes exceed data rows");
    std::vector<int> idx(data.rows());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(args.seed);
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i)
      std::swap(idx[i], idx[rng.next_u64() % (i + 1)]);
    const Dataset train = subset_rows(data, {idx.begin(), idx.begin() + a});
    const Dataset tune = subset_rows(data, {idx.begin() + a, idx.begin() + a + b});
    const Dataset test = subset_rows(data, {idx.begin() + a + b, idx.begin() + a + b + c});

    Eigen::VectorXd grid;
    if (!grid_raw.empty())
      grid = parse_lambda_grid(grid_raw);
    else if (has_lambda)
      grid = Eigen::VectorXd::Constant(1, lambda);
    else
      grid = default_lambda_grid(train.rows());
    params["lambda_grid"] = vector_to_json(grid);
    params["split"] = {a, b, c};
    params["test_metric"] = metric;

    const CompositeFit stage1 = fit_clpqr(train, args.k, args.p, args.solver.config);
    const PenaltyWeights none = PenaltyWeights::zeros(train.cols());
    double best_loss = std::numeric_limits<double>::infinity();
    CompositeFit best;
    double best_lambda = 0.0;
    std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> warm;
    for (Eigen::Index i = grid.size() - 1; i >= 0; --i) {
      PenaltyWeights w = PenaltyWeights::zeros(train.cols());
      if (grid[i] > 0.0)
        for (Eigen::Index j = 0; j < train.cols(); ++j) {
          const double denom = stage1.beta[j] * stage1.beta[j];
          w.w[j] = denom > 0.0
                       ? std::min(grid[i] / static_cast<double>(train.rows()) / denom, w_max)
                       : w_max;
        }
      clear_unpenalized(w);
      const CompositeFit f = fit(train, taus, args.p, w, args.solver.config, warm);
      warm = std::make_pair(f.b, f.beta);
      const double loss = objective(tune, taus, args.p, f.b, f.beta, none);
      if (loss < best_loss) {
        best_loss = loss;
        best = f;
        best_lambda = grid[i];
      }
    }
    results = fit_to_json(best);
    results["lambda"] = best_lambda;
    results["stage1_beta"] = vector_to_json(stage1.beta);
    results["tuning_loss"] = best_loss;
    if (c > 0) results["test_error"] = test_error(test, best, metric, args.p);
    json support = json::array();
    for (Eigen::Index j = 0; j < best.beta.size(); ++j)
      if (best.beta[j] != 0.0) support.push_back(static_cast<int>(j));
    results["support"] = support;
    results["n_zero_coefficients"] =
        static_cast<int>(best.beta.size()) - static_cast<int>(support.size());
  } else {
    if (!grid_raw.empty())
      throw std::invalid_argument("oracle: --lambda-grid tuning requires --split");
    const double lam = has_lambda ? lambda : std::sqrt(T_all);
    params["lambda"] = lam;
    OracleFit ofit = fit_aclpqr(data, args.k, args.p, lam, args.solver.config, w_max);
    results = fit_to_json(ofit.fit);
    results["lambda"] = ofit.lambda;
    results["stage1_beta"] = vector_to_json(ofit.stage1.beta);
    results["support"] = ofit.support;
    results["n_zero_coefficients"] =
        static_cast<int>(ofit.fit.beta.size()) - static_cast<int>(ofit.support.size());
  }

  out["params"] = params;
  out["results"] = results;
  out["diagnostics"] = {{"preprocessing", preprocessing_to_json(loaded.report)}};
  out["seed"] = args.seed;
  emit_json(args.output, out);
  return 0;
}

int cmd_nearqr(CommonFitArgs& args, double tau, bool covariance, double psi_floor) {
  LoadedData loaded = load_csv(args.input, args.response, args.preproc.resolve());
  const NearQrFit f = fit_near_qr_full(loaded.data, tau, args.p, args.solver.config);

  json out;
  out["command"] = covariance ? "cov" : "nearqr";
  out["params"] = {{"input", args.input},   {"p", args.p},
                   {"response", args.response}, {"solver", args.solver.to_json()},
                   {"tau", tau}};
  out["results"] = fit_to_json(f.fit);
  if (f.p_above_near_range)
    out["diagnostics"]["warnings"] = {"p above the near-quantile range (1, 1.1]"};
  if (covariance) {
    const CovarianceEstimate cov =
        estimate_sigma0(loaded.data, f.beta, tau, args.p, psi_floor);
    out["results"]["gram_inverse"] = matrix_to_json(cov.gram_inverse);
    out["results"]["psi_mean"] = cov.psi_mean;
    out["results"]["sigma0"] = matrix_to_json(cov.sigma0);
    out["params"]["psi_floor"] = psi_floor;
  }
  out["diagnostics"]["preprocessing"] = preprocessing_to_json(loaded.report);
  out["seed"] = args.seed;
  emit_json(args.output, out);
  return 0;
}

int cmd_simulate(const std::string& error_spec, double p, int k, int reps,
                 std::uint64_t seed, const std::string& grid_raw, int threads,
                 int t_train, int t_tune, const SolverConfig& config,
                 const std::string& output) {
  DGPConfig dgp(parse_error_spec(error_spec));
  dgp.T_train = t_train;
  dgp.T_tune = t_tune;
  const Eigen::VectorXd grid =
      grid_raw.empty() ? default_lambda_grid(t_train) : parse_lambda_grid(grid_raw);
  const ReplicationSummary s =
      run_replications(dgp, p, k, grid, reps, seed, config, threads);

  std::string text = "error,p,k,reps,seed,ee_mean,anc,anic,failures\n";
  text += csv_row({error_spec, format_double(p), std::to_string(k), std::to_string(reps),
                   std::to_string(seed), format_double(s.ee_mean), format_double(s.anc),
                   format_double(s.anic), std::to_string(s.failures)});
  emit(output, text);
  return 0;
}

int cmd_are(const DistOpts& dist_opts, const std::string& method, double p,
            const std::string& p_grid_raw, long n, int inner, std::uint64_t seed,
            const std::string& output) {
  const ErrorDistribution dist = dist_opts.resolve();
  std::string text = "dist,method,p,value,std_error,n_samples\n";
  const auto row = [&](double pv, const AREResult& r) {
    text += csv_row({dist_opts.dist, method, format_double(pv), format_double(r.value),
                     format_double(r.std_error), std::to_string(r.n_samples)});
  };
  if (method == "closed") {
    row(1.0, are_cqr_closed(dist));
  } else if (method == "generic") {
    row(1.0, are_cqr_generic(dist));
  } else if (method == "mc") {
    if (!p_grid_raw.empty()) {
      const auto parts = parse_triplet(p_grid_raw, "--p-grid");
      const int np = static_cast<int>(parts[2]);
      if (np < 1) throw std::invalid_argument("--p-grid: n >= 1 required");
      for (int i = 0; i < np; ++i) {
        const double pv = np == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (np - 1.0);
        row(pv, are_clpqr_mc(dist, pv, n, mix_seed(seed, i), inner));
      }
    } else {
      row(p, are_clpqr_mc(dist, p, n, seed, inner));
    }
  } else {
    throw std::invalid_argument("--method: expected closed, generic or mc");
  }
  emit(output, text);
  return 0;
}

int cmd_lpq(const DistOpts& dist_opts, bool has_dist, const std::string& input,
            const std::string& response, double tau, double p,
            const std::string& output) {
  json out;
  out["command"] = "lpq";
  LpQuantileResult r;
  if (has_dist) {
    r = lp_quantile_dist(dist_opts.resolve(), tau, p);
    out["params"] = {{"dist", dist_opts.to_json()}, {"p", p}, {"tau", tau}};
  } else {
    if (input.empty()) throw std::invalid_argument("lpq: need --dist or --input");
    LoadedData loaded = load_csv(input, response, {});
    r = lp_quantile_sample(loaded.data.y, LossSpec{tau, p});
    out["params"] = {{"input", input}, {"p", p}, {"response", response}, {"tau", tau}};
  }
  out["results"] = {{"iterations", r.iterations}, {"residual", r.residual}, {"value", r.value}};
  out["seed"] = 0;
  emit_json(output, out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Composite L^p-quantile regression toolkit"};
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "composite L^p-quantile regression on a CSV");
  CommonFitArgs fit_args;
  fit_args.attach(fit_cmd);
  double fit_lambda = 0.0, fit_tau = 0.5;
  fit_cmd->add_option("--lambda", fit_lambda, "uniform L1 penalty (lasso analogue)");
  auto* fit_tau_opt = fit_cmd->add_option("--tau-single", fit_tau, "single level instead of the K grid");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "adaptive-lasso CLpQR with optional tuning split");
  CommonFitArgs oracle_args;
  oracle_args.attach(oracle_cmd);
  double oracle_lambda = 0.0, w_max = 1e12;
  std::string oracle_grid, oracle_split, oracle_metric = "l2", unpenalized;
  auto* oracle_lambda_opt = oracle_cmd->add_option("--lambda", oracle_lambda, "fixed penalty");
  oracle_cmd->add_option("--lambda-grid", oracle_grid, "lo:hi:n log-spaced tuning grid");
  oracle_cmd->add_option("--split", oracle_split, "train:tune:test row counts");
  oracle_cmd->add_option("--test-metric", oracle_metric, "lp|l1|l2");
  oracle_cmd->add_option("--unpenalized-cols", unpenalized, "columns never penalized");
  oracle_cmd->add_option("--w-max", w_max, "adaptive weight cap");

  // nearqr / cov
  auto* nearqr_cmd = app.add_subcommand("nearqr", "near quantile regression (no intercept added)");
  CommonFitArgs nearqr_args;
  nearqr_args.p = 1.01;
  nearqr_args.attach(nearqr_cmd, /*with_k=*/false);
  double nearqr_tau = 0.5;
  nearqr_cmd->add_option("--tau-single", nearqr_tau, "quantile level");

  auto* cov_cmd = app.add_subcommand("cov", "near-qr fit plus asymptotic covariance estimate");
  CommonFitArgs cov_args;
  cov_args.p = 1.01;
  cov_args.attach(cov_cmd, /*with_k=*/false);
  double cov_tau = 0.5, psi_floor = 1e-8;
  cov_cmd->add_option("--tau-single", cov_tau, "quantile level");
  cov_cmd->add_option("--psi-floor", psi_floor, "psi singularity floor");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "seeded replication batch on the sparse DGP");
  std::string sim_error = "e1", sim_grid, sim_output;
  double sim_p = 2.0;
  int sim_k = 19, sim_reps = 100, sim_threads = 0, sim_train = 100, sim_tune = 100;
  std::uint64_t sim_seed = 0;
  SolverOpts sim_solver;
  sim_cmd->add_option("--error", sim_error, "e1|e2|e3|e4 or family:params");
  sim_cmd->add_option("--p", sim_p, "loss exponent");
  sim_cmd->add_option("--k", sim_k, "composite levels");
  sim_cmd->add_option("--reps", sim_reps, "replicates");
  sim_cmd->add_option("--seed", sim_seed, "master seed");
  sim_cmd->add_option("--lambda-grid", sim_grid, "lo:hi:n tuning grid");
  sim_cmd->add_option("--threads", sim_threads, "worker threads (0 = hardware)");
  sim_cmd->add_option("--t-train", sim_train, "training rows");
  sim_cmd->add_option("--t-tune", sim_tune, "tuning rows");
  sim_cmd->add_option("--output", sim_output, "output path (default stdout)");
  sim_solver.attach(sim_cmd);

  // are
  auto* are_cmd = app.add_subcommand("are", "asymptotic relative efficiency calculators");
  DistOpts are_dist;
  are_dist.attach(are_cmd);
  std::string are_method = "closed", are_pgrid, are_output;
  double are_p = 1.5;
  long are_n = 200000;
  int are_inner = 64;
  std::uint64_t are_seed = 0;
  are_cmd->add_option("--method", are_method, "closed|generic|mc");
  are_cmd->add_option("--p", are_p, "loss exponent for mc");
  are_cmd->add_option("--p-grid", are_pgrid, "lo:hi:n sweep for mc");
  are_cmd->add_option("--n", are_n, "outer Monte-Carlo draws");
  are_cmd->add_option("--inner", are_inner, "inner draws per outer draw");
  are_cmd->add_option("--seed", are_seed, "master seed");
  are_cmd->add_option("--output", are_output, "output path (default stdout)");

  // lpq
  auto* lpq_cmd = app.add_subcommand("lpq", "scalar L^p-quantile of a sample or distribution");
  DistOpts lpq_dist;
  lpq_dist.attach(lpq_cmd);
  std::string lpq_input, lpq_response, lpq_output;
  double lpq_tau = 0.5, lpq_p = 2.0;
  lpq_cmd->add_option("--input", lpq_input, "CSV path (sample mode)");
  lpq_cmd->add_option("--response", lpq_response, "column for sample mode");
  lpq_cmd->add_option("--tau", lpq_tau, "level");
  lpq_cmd->add_option("--p", lpq_p, "loss exponent");
  lpq_cmd->add_option("--output", lpq_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string out_path = [&]() -> std::string {
    if (fit_cmd->parsed()) return fit_args.output;
    if (oracle_cmd->parsed()) return oracle_args.output;
    if (nearqr_cmd->parsed()) return nearqr_args.output;
    if (cov_cmd->parsed()) return cov_args.output;
    if (sim_cmd->parsed()) return sim_output;
    if (are_cmd->parsed()) return are_output;
    return lpq_output;
  }();

  const auto fail = [&](int code, const std::string& kind, const std::string& message) {
    json err{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
    try {
      emit_json(out_path, err);
    } catch (...) {
      std::ostringstream os;
      write_json(err, os);
      std::cerr << os.str() << "\n";
    }
    return code;
  };

  try {
    if (fit_cmd->parsed())
      return cmd_fit(fit_args, fit_lambda, fit_tau, fit_tau_opt->count() > 0);
    if (oracle_cmd->parsed())
      return cmd_oracle(oracle_args, oracle_lambda, oracle_lambda_opt->count() > 0,
                        oracle_grid, oracle_split, oracle_metric, unpenalized, w_max);
    if (nearqr_cmd->parsed()) return cmd_nearqr(nearqr_args, nearqr_tau, false, 0.0);
    if (cov_cmd->parsed()) return cmd_nearqr(cov_args, cov_tau, true, psi_floor);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_error, sim_p, sim_k, sim_reps, sim_seed, sim_grid,
                          sim_threads, sim_train, sim_tune, sim_solver.config, sim_output);
    if (are_cmd->parsed())
      return cmd_are(are_dist, are_method, are_p, are_pgrid, are_n, are_inner, are_seed,
                     are_output);
    if (lpq_cmd->parsed())
      return cmd_lpq(lpq_dist, lpq_cmd->count("--dist") > 0, lpq_input, lpq_response,
                     lpq_tau, lpq_p, lpq_output);
    return 2;
  } catch (const DataError& e) {
    return fail(3, "data", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(2, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(4, "numeric", e.what());
  }
}

}  // namespace clpqr
