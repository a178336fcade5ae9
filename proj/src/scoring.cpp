#include "arlgm/scoring.hpp"

#include <Eigen/Cholesky>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "arlgm/errors.hpp"

namespace arlgm {

double relative_entropy_rate(const PseudoPoly& reference,
                             const std::vector<CMatrix>& model_spectrum,
                             const FreqGrid& grid) {
  const int m = reference.dim();
  if (static_cast<int>(model_spectrum.size()) != grid.size())
    throw ConfigError("relative_entropy_rate: grid size mismatch");
  double acc = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    CMatrix ref = reference.eval(grid.theta(k));
    Eigen::LLT<CMatrix> lref(ref);
    if (lref.info() != Eigen::Success)
      throw DataError("relative_entropy_rate: reference spectrum not PD");
    Eigen::LLT<CMatrix> lmod(model_spectrum[k]);
    if (lmod.info() != Eigen::Success)
      throw DataError("relative_entropy_rate: model spectrum not PD");
    double logdet_ref =
        2.0 * lref.matrixLLT().diagonal().real().array().log().sum();
    double logdet_mod =
        2.0 * lmod.matrixLLT().diagonal().real().array().log().sum();
    acc += logdet_mod - logdet_ref + lmod.solve(ref).trace().real();
  }
  return 0.5 * (acc / grid.size() - m);
}

int complexity(const EdgeSet& edges, int l) {
  return edges.count() + edges.dim() * l;
}

RegPath RegPath::log_grid(double lambda_lo, double lambda_hi, int n_lambda,
                          double gamma_lo, double gamma_hi, int n_gamma) {
  if (!(lambda_lo > 0.0) || !(gamma_lo > 0.0) || lambda_hi < lambda_lo ||
      gamma_hi < gamma_lo || n_lambda < 1 || n_gamma < 1)
    throw ConfigError("log_grid: invalid path bounds");
  auto steps = [](double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
      double t = n == 1 ? 0.5 : static_cast<double>(i) / (n - 1);
      v[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    }
    return v;
  };
  RegPath path;
  for (double lambda : steps(lambda_lo, lambda_hi, n_lambda))
    for (double gamma : steps(gamma_lo, gamma_hi, n_gamma))
      path.points.emplace_back(lambda, gamma);
  return path;
}

PseudoPoly scoring_reference(const Matrix& data, int window,
                             bool subtract_mean, const FreqGrid& grid) {
  PseudoPoly ref = bartlett_correlogram(data, window, subtract_mean);
  const int m = ref.dim();
  double level = 1e-8 * ref.coef(0).trace() / m;
  if (min_eig_on_grid(ref, grid) < level)
    ref.coef(0) += level * Matrix::Identity(m, m);
  return ref;
}

ScoredModel identify_point(const CovSequence& cov, const RegParams& reg,
                           const PseudoPoly& reference,
                           const SweepOptions& opts) {
  ScoredModel out;
  out.reg = reg;
  const int m = cov.lags.dim();
  try {
    DualSolution dual = solve_sl_dual(cov, reg, opts.solver);
    out.cert = dual.cert;
    if (!dual.cert.certified) {
      out.status = "dual solve not certified";
      return out;
    }
    Matrix x = recover_x(cov, dual);
    LatentStructure lat;
    if (opts.no_latent) {
      lat.l = 0;
      lat.g = Matrix::Zero(0, x.rows());
      lat.h = Matrix::Zero(0, 0);
      lat.low_rank = Matrix::Zero(x.rows(), x.cols());
      lat.unique = true;
    } else {
      lat = recover_latent(dual, x, reg, opts.solver);
    }
    EdgeSet edges = support_edges(x, lat.low_rank, m, opts.solver.support_tol);
    out.unique = lat.unique;
    // The support is read off the certified full-null-space solution; only
    // the structure handed to the refit drops low-weight latent directions.
    LatentStructure fit = reduce_latent(lat, opts.latent_weight_floor);
    out.transversal = transversality(edges, fit.g, m);
    out.model = solve_fixed(cov, edges, fit.g, opts.maxent);
    FreqGrid grid(opts.maxent.grid_size);
    out.ext = certify_extension(out.model, cov, grid, opts.maxent.tol);
    if (!out.ext.ok) {
      out.status = "extension certificate failed";
      return out;
    }
    PseudoPoly inv = out.model.inverse_manifest();
    std::vector<CMatrix> spectrum(grid.size());
    const CMatrix id = CMatrix::Identity(m, m);
    for (int k = 0; k < grid.size(); ++k) {
      Eigen::LLT<CMatrix> llt(CMatrix(inv.eval(grid.theta(k))));
      if (llt.info() != Eigen::Success)
        throw SolverError("identify_point: fitted spectrum not PD on grid");
      spectrum[k] = llt.solve(id);
    }
    out.d = relative_entropy_rate(reference, spectrum, grid);
    out.p = complexity(edges, out.model.l);
    double alpha = opts.additive_alpha > 0.0
                       ? opts.additive_alpha
                       : 1.0 / std::max(1, cov.sample_size);
    out.f = opts.additive_score ? out.d + alpha * out.p
                                : out.d * static_cast<double>(out.p);
    out.ok = true;
    out.status = "ok";
  } catch (const std::exception& e) {
    out.ok = false;
    out.status = e.what();
  }
  return out;
}

SweepResult sweep(const Matrix& data, const RegPath& path,
                  const SweepOptions& opts) {
  if (path.points.empty()) throw ConfigError("sweep: empty path");
  for (auto [lambda, gamma] : path.points)
    if (!(lambda > 0.0) || !(gamma > 0.0))
      throw ConfigError("sweep: nonpositive path entry");
  SweepResult result;
  result.cov = estimate_lags(data, opts.n, opts.subtract_mean);
  result.bartlett_window =
      opts.bartlett_window >= 0
          ? opts.bartlett_window
          : default_bartlett_order(static_cast<int>(data.rows()));
  FreqGrid grid(opts.maxent.grid_size);
  PseudoPoly reference =
      scoring_reference(data, result.bartlett_window, opts.subtract_mean, grid);

  result.models.resize(path.points.size());
  const int workers =
      std::max(1, std::min<int>(opts.workers,
                                static_cast<int>(path.points.size())));
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= path.points.size()) break;
      RegParams reg{path.points[i].first, path.points[i].second};
      result.models[i] = identify_point(result.cov, reg, reference, opts);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (size_t i = 0; i < result.models.size(); ++i) {
    const ScoredModel& cand = result.models[i];
    if (!cand.ok) continue;
    if (result.selected < 0) {
      result.selected = static_cast<int>(i);
      continue;
    }
    const ScoredModel& best = result.models[result.selected];
    bool better = cand.f < best.f ||
                  (cand.f == best.f &&
                   (cand.p < best.p ||
                    (cand.p == best.p && cand.model.l < best.model.l)));
    if (better) result.selected = static_cast<int>(i);
  }
  if (result.selected < 0)
    throw SolverError("sweep: every path point failed");
  return result;
}

}  // namespace arlgm
