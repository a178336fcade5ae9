#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arlgm/covariance.hpp"
#include "arlgm/errors.hpp"
#include "arlgm/io.hpp"
#include "arlgm/maxent.hpp"
#include "arlgm/scoring.hpp"
#include "arlgm/simulate.hpp"
#include "arlgm/spectrum.hpp"

namespace {

using namespace arlgm;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SimulateArgs {
  int m = 15, l = 1, n = 1, samples = 500, burn_in = -1;
  double edge_density = 0.2;
  std::uint64_t seed = 1;
  std::string out_model, out_data;
};

struct IdentifyArgs {
  std::string data_path, truth_path, out_prefix;
  bool returns = false, keep_mean = false, no_latent = false;
  bool additive = false, trace = false;
  double additive_alpha = -1.0;
  int n = 1, bartlett = -1, grid_size = 512, workers = 1, max_newton = 800;
  double tol = 1e-6, mu_min = 1e-8, rank_tol = 1e-5, support_tol = 1e-5;
  double weight_floor = 0.25;
  std::vector<double> lambdas, gammas;
  double lambda_lo = 0.1, lambda_hi = 10.0, gamma_lo = 0.1, gamma_hi = 10.0;
  int lambda_count = 5, gamma_count = 5;
};

struct ScoreArgs {
  std::string model_path, data_path, out_path;
  bool returns = false, keep_mean = false, additive = false;
  double additive_alpha = -1.0;
  int bartlett = -1, grid_size = 512;
};

Matrix load_series(const std::string& path, bool returns,
                   std::vector<std::string>* names) {
  Table table = read_csv(path);
  if (names) *names = table.names;
  return returns ? log_returns(table.data) : table.data;
}

int run_simulate(const SimulateArgs& args) {
  LatentArModel model =
      gen_model(args.m, args.l, args.n, args.edge_density, args.seed);
  Matrix data = sample(model, args.samples, args.seed, args.burn_in);
  write_true_model(args.out_model, model, args.seed);
  Table table;
  for (int k = 0; k < args.m; ++k) table.names.push_back("x" + std::to_string(k));
  table.data = std::move(data);
  write_csv(args.out_data, table);
  std::cout << "simulated m=" << model.m << " l=" << model.l
            << " n=" << model.n << " N=" << args.samples
            << " edges=" << model.edges.count()
            << " companion_radius=" << fmt(model.companion_radius) << "\n";
  return 0;
}

void write_coherence(const std::string& prefix, const FixedModel& model,
                     const std::vector<std::string>& names, int grid_size) {
  JointSpectrum joint = assemble_joint(model);
  if (joint.dropped > 0) {
    std::cerr << "note: dropped " << joint.dropped
              << " numerically null latent gain directions\n";
  }
  std::vector<std::string> labels = names;
  for (int i = 0; i < joint.l; ++i) labels.push_back("u" + std::to_string(i));
  const int d = joint.joint_dim();
  FreqGrid grid(grid_size);
  std::vector<CMatrix> coherence = partial_coherence(joint, grid);

  Table curve;
  curve.names.push_back("theta");
  for (int k = 0; k < d; ++k)
    for (int h = k + 1; h < d; ++h)
      curve.names.push_back(labels[k] + "|" + labels[h]);
  curve.data.resize(grid.size(), 1 + d * (d - 1) / 2);
  for (int t = 0; t < grid.size(); ++t) {
    curve.data(t, 0) = grid.theta(t);
    int col = 1;
    for (int k = 0; k < d; ++k)
      for (int h = k + 1; h < d; ++h)
        curve.data(t, col++) = std::abs(coherence[t](k, h));
  }
  write_csv(prefix + ".coherence.csv", curve);

  Table mean;
  mean.names = labels;
  mean.data = coherence_mean_abs(coherence);
  write_csv(prefix + ".coherence_mean.csv", mean);
}

void write_error_curves(const std::string& prefix, const std::string& truth,
                        const FixedModel& model, int grid_size) {
  LatentArModel true_model = read_true_model(truth);
  if (true_model.m != model.m) {
    throw ConfigError("truth model dimension does not match the data");
  }
  FreqGrid grid(grid_size);
  ErrorCurves curves =
      spectral_errors(true_model.sparse_part(), true_model.low_rank_part(),
                      model.sparse_poly(), model.low_rank_poly(), grid);
  Table table;
  table.names.push_back("theta");
  int cols = 1;
  if (curves.sigma_defined) {
    table.names.push_back("e_sigma");
    ++cols;
  }
  if (curves.lambda_defined) {
    table.names.push_back("e_lambda");
    ++cols;
  }
  table.data.resize(grid.size(), cols);
  for (int t = 0; t < grid.size(); ++t) {
    table.data(t, 0) = grid.theta(t);
    int col = 1;
    if (curves.sigma_defined) table.data(t, col++) = curves.e_sigma[t];
    if (curves.lambda_defined) table.data(t, col++) = curves.e_lambda[t];
  }
  write_csv(prefix + ".errors.csv", table);
}

int run_identify(const IdentifyArgs& args) {
  std::vector<std::string> names;
  Matrix data = load_series(args.data_path, args.returns, &names);

  RegPath path;
  if (!args.lambdas.empty() || !args.gammas.empty()) {
    if (args.lambdas.empty() || args.gammas.empty()) {
      throw ConfigError("explicit path needs both --lambdas and --gammas");
    }
    for (double lambda : args.lambdas)
      for (double gamma : args.gammas) path.points.emplace_back(lambda, gamma);
  } else {
    path = RegPath::log_grid(args.lambda_lo, args.lambda_hi, args.lambda_count,
                             args.gamma_lo, args.gamma_hi, args.gamma_count);
  }

  SweepOptions opts;
  opts.n = args.n;
  opts.bartlett_window = args.bartlett;
  opts.subtract_mean = !args.keep_mean;
  opts.no_latent = args.no_latent;
  opts.additive_score = args.additive;
  opts.additive_alpha = args.additive_alpha;
  opts.workers = args.workers;
  opts.solver.tol = args.tol;
  opts.solver.mu_min = args.mu_min;
  opts.solver.max_newton = args.max_newton;
  opts.solver.grid_size = args.grid_size;
  opts.solver.rank_tol = args.rank_tol;
  opts.solver.support_tol = args.support_tol;
  opts.latent_weight_floor = args.weight_floor;
  opts.solver.trace = args.trace;
  opts.maxent.tol = args.tol;
  opts.maxent.grid_size = args.grid_size;
  opts.maxent.trace = args.trace;

  SweepResult result = sweep(data, path, opts);
  write_sweep_report(args.out_prefix + ".sweep.json", result, opts);
  const ScoredModel& best = result.models[result.selected];
  write_identified_model(args.out_prefix + ".model.json", best);
  write_dot(args.out_prefix + ".graph.dot", best.model.edges, best.model.l,
            names);
  write_coherence(args.out_prefix, best.model, names, args.grid_size);
  if (!args.truth_path.empty()) {
    write_error_curves(args.out_prefix, args.truth_path, best.model,
                       args.grid_size);
  }

  int ok = 0;
  for (const ScoredModel& point : result.models) ok += point.ok ? 1 : 0;
  std::cout << "path points ok: " << ok << "/" << result.models.size() << "\n"
            << "selected: lambda=" << fmt(best.reg.lambda)
            << " gamma=" << fmt(best.reg.gamma)
            << " edges=" << best.model.edges.count() << " l=" << best.model.l
            << " d=" << fmt(best.d) << " p=" << best.p << " f=" << fmt(best.f)
            << "\n";
  return 0;
}

int run_score(const ScoreArgs& args) {
  ScoredModel point = read_identified_model(args.model_path);
  const FixedModel& model = point.model;
  Matrix data = load_series(args.data_path, args.returns, nullptr);
  if (static_cast<int>(data.cols()) != model.m) {
    throw ConfigError("model dimension " + std::to_string(model.m) +
                      " does not match data with " +
                      std::to_string(data.cols()) + " columns");
  }
  FreqGrid grid(args.grid_size);
  int window = args.bartlett > 0 ? args.bartlett
                                 : default_bartlett_order(
                                       static_cast<int>(data.rows()));
  PseudoPoly reference =
      scoring_reference(data, window, !args.keep_mean, grid);

  PseudoPoly inv = model.inverse_manifest();
  std::vector<CMatrix> spectrum(grid.size());
  const CMatrix id = CMatrix::Identity(model.m, model.m);
  for (int k = 0; k < grid.size(); ++k) {
    Eigen::LLT<CMatrix> llt(CMatrix(inv.eval(grid.theta(k))));
    if (llt.info() != Eigen::Success) {
      throw SolverError("score: model inverse spectrum not PD on grid");
    }
    spectrum[k] = llt.solve(id);
  }
  const double d = relative_entropy_rate(reference, spectrum, grid);
  const int p = complexity(model.edges, model.l);
  const double alpha = args.additive_alpha > 0.0
                           ? args.additive_alpha
                           : 1.0 / std::max<Eigen::Index>(1, data.rows());
  const double f = args.additive ? d + alpha * p : d * p;
  std::cout << "d=" << fmt(d) << "\np=" << p << "\nf=" << fmt(f) << "\n";
  if (!args.out_path.empty()) {
    SweepOptions echo;
    echo.n = model.n;
    echo.bartlett_window = window;
    echo.additive_score = args.additive;
    echo.additive_alpha = args.additive_alpha;
    SweepResult report;
    report.bartlett_window = window;
    report.cov = estimate_lags(data, model.n, !args.keep_mean);
    point.d = d;
    point.p = p;
    point.f = f;
    point.ok = true;
    point.status = "ok";
    report.models.push_back(point);
    report.selected = 0;
    write_sweep_report(args.out_path, report, echo);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AR latent-variable graphical model identification"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Draw a ground-truth model and sample a time series");
  simulate->add_option("--m", sim.m, "manifest dimension")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--l", sim.l, "latent dimension")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--n", sim.n, "AR order")->check(CLI::NonNegativeNumber);
  simulate->add_option("--samples,--N", sim.samples, "sample count")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--edge-density", sim.edge_density,
                       "manifest edge density in (0, 1)");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--burn-in", sim.burn_in,
                       "burn-in samples (negative selects the default)");
  simulate->add_option("--out-model", sim.out_model, "model JSON path")
      ->required();
  simulate->add_option("--out-data", sim.out_data, "data CSV path")->required();

  IdentifyArgs idn;
  CLI::App* identify = app.add_subcommand(
      "identify", "Sweep a regularization path and select a model");
  identify->add_option("--data", idn.data_path, "input CSV")->required();
  identify->add_flag("--returns", idn.returns,
                     "input is prices; apply log returns");
  identify->add_flag("--keep-mean", idn.keep_mean,
                     "skip mean subtraction in lag estimation");
  identify->add_option("--n", idn.n, "AR order")->check(CLI::NonNegativeNumber);
  identify->add_option("--bartlett-window", idn.bartlett,
                       "reference window (default ceil(N^(1/3)))");
  identify->add_option("--grid-size", idn.grid_size, "frequency grid size")
      ->check(CLI::PositiveNumber);
  identify->add_option("--lambdas", idn.lambdas, "explicit lambda list")
      ->delimiter(',');
  identify->add_option("--gammas", idn.gammas, "explicit gamma list")
      ->delimiter(',');
  identify->add_option("--lambda-min", idn.lambda_lo, "grid lower lambda");
  identify->add_option("--lambda-max", idn.lambda_hi, "grid upper lambda");
  identify->add_option("--lambda-count", idn.lambda_count, "grid lambda count")
      ->check(CLI::PositiveNumber);
  identify->add_option("--gamma-min", idn.gamma_lo, "grid lower gamma");
  identify->add_option("--gamma-max", idn.gamma_hi, "grid upper gamma");
  identify->add_option("--gamma-count", idn.gamma_count, "grid gamma count")
      ->check(CLI::PositiveNumber);
  identify->add_flag("--no-latent", idn.no_latent, "force l = 0");
  identify->add_flag("--additive-score", idn.additive,
                     "score d + alpha p instead of d * p");
  identify->add_option("--additive-alpha", idn.additive_alpha,
                       "additive score weight (default 1/N)");
  identify->add_option("--workers", idn.workers, "parallel path-point solves")
      ->check(CLI::PositiveNumber);
  identify->add_option("--tol", idn.tol, "solver tolerance");
  identify->add_option("--mu-min", idn.mu_min, "barrier schedule end");
  identify->add_option("--max-newton", idn.max_newton, "Newton-step budget");
  identify->add_option("--rank-tol", idn.rank_tol, "latent rank threshold");
  identify->add_option("--support-tol", idn.support_tol, "edge threshold");
  identify->add_option("--weight-floor", idn.weight_floor,
                       "keep latent directions above this fraction of the "
                       "top gram weight (0 keeps all)");
  identify->add_flag("--trace", idn.trace, "verbose solver trace to stderr");
  identify->add_option("--truth", idn.truth_path,
                       "ground-truth model JSON; emits error curves");
  identify->add_option("--out-prefix", idn.out_prefix, "output path prefix")
      ->required();

  ScoreArgs sc;
  CLI::App* score = app.add_subcommand(
      "score", "Rescore an identified model against a data file");
  score->add_option("--model", sc.model_path, "identified model JSON")
      ->required();
  score->add_option("--data", sc.data_path, "data CSV")->required();
  score->add_flag("--returns", sc.returns, "input is prices; apply log returns");
  score->add_flag("--keep-mean", sc.keep_mean, "skip mean subtraction");
  score->add_option("--bartlett-window", sc.bartlett, "reference window");
  score->add_option("--grid-size", sc.grid_size, "frequency grid size")
      ->check(CLI::PositiveNumber);
  score->add_flag("--additive-score", sc.additive, "score d + alpha p");
  score->add_option("--additive-alpha", sc.additive_alpha,
                    "additive score weight (default 1/N)");
  score->add_option("--out", sc.out_path, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (identify->parsed()) return run_identify(idn);
    return run_score(sc);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
