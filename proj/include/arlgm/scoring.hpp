#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arlgm/covariance.hpp"
#include "arlgm/maxent.hpp"
#include "arlgm/sl_dual.hpp"

namespace arlgm {

/// Relative entropy rate between the process with spectrum `reference`
/// (positive definite pseudo-polynomial) and the model spectrum sampled on
/// the grid: half of (grid mean of log det(ref^{-1} model) + tr(ref model^{-1}))
/// minus half the dimension.  Nonnegative; zero iff the two agree on the grid.
double relative_entropy_rate(const PseudoPoly& reference,
                             const std::vector<CMatrix>& model_spectrum,
                             const FreqGrid& grid);

/// Complexity p = |unordered off-diagonal edges| + m * l.
int complexity(const EdgeSet& edges, int l);

struct RegPath {
  std::vector<std::pair<double, double>> points;  // (lambda, gamma)
  static RegPath log_grid(double lambda_lo, double lambda_hi, int n_lambda,
                          double gamma_lo, double gamma_hi, int n_gamma);
};

struct SweepOptions {
  int n = 1;                 // AR order of the fitted models
  int bartlett_window = -1;  // reference window; < 0 selects ceil(N^(1/3))
  bool subtract_mean = true;
  bool no_latent = false;        // skip latent recovery, force l = 0
  bool additive_score = false;   // score D + alpha p instead of D * p
  double additive_alpha = -1.0;  // < 0 selects 1/N
  // Before the fixed-structure refit, drop latent directions whose gram
  // weight is below this fraction of the largest (0 keeps the full null
  // space).  Finite samples blur the rank cut of the dual certificate, so
  // the recovered null space can carry near-zero-weight directions.
  double latent_weight_floor = 0.25;
  int workers = 1;
  SolverOptions solver;
  MaxentOptions maxent;
};

struct ScoredModel {
  RegParams reg;
  std::string status = "ok";  // "ok" or the failure reason
  bool ok = false;
  FixedModel model;  // valid when ok
  DualCertificate cert;
  ExtensionCertificate ext;
  bool transversal = false;
  bool unique = false;  // latent gram recovery had full column rank
  double d = 0.0;       // relative entropy rate vs the Bartlett reference
  int p = 0;            // complexity
  double f = 0.0;       // selection score
};

struct SweepResult {
  std::vector<ScoredModel> models;  // one per path point, in path order
  int selected = -1;                // argmin of f over the ok models
  CovSequence cov;
  int bartlett_window = 0;

  SweepResult() : cov{BlockRow(1, 0), 0, 0.0} {}
};

/// Run identification (dual solve, primal recovery, structure extraction,
/// fixed-structure fit) and scoring for a single path point.  Failures are
/// captured in the status field, never thrown.
ScoredModel identify_point(const CovSequence& cov, const RegParams& reg,
                           const PseudoPoly& reference,
                           const SweepOptions& opts);

/// Full regularization-path sweep over the data.  Throws SolverError if
/// every path point fails.
SweepResult sweep(const Matrix& data, const RegPath& path,
                  const SweepOptions& opts);

/// Bartlett reference spectrum used by sweep: windowed correlogram with a
/// diagonal ridge when its grid minimum eigenvalue falls below
/// 1e-8 tr(R0)/m.
PseudoPoly scoring_reference(const Matrix& data, int window,
                             bool subtract_mean, const FreqGrid& grid);

}  // namespace arlgm
