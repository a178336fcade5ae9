#pragma once

#include "arlgm/algebra.hpp"
#include "arlgm/covariance.hpp"

namespace arlgm {

struct MaxentOptions {
  double mu_init = 1.0;
  double mu_factor = 10.0;
  double mu_floor = 1e-9;
  double tol = 1e-6;  // moment-match target, used for early exit
  int max_newton = 600;
  int grid_size = 512;
  bool trace = false;
};

/// Fixed-structure maximum-entropy fit: inverse-spectrum coefficients x and
/// latent gain h on the factor g, with shift_quadratic(x + g' h g) supported
/// on the given edge set.  The manifest inverse spectrum is
/// shift_quadratic(x); the sparse and low-rank parts differ by g' h g.
struct FixedModel {
  int m = 0, n = 0, l = 0;
  EdgeSet edges;
  Matrix g;         // l x m(n+1), full row rank
  Matrix x;         // m(n+1) x m(n+1), PSD with PD leading block
  Matrix h;         // l x l, PSD
  Matrix low_rank;  // g' h g
  double objective = 0.0;  // -log det X00 + <T(R), X>
  double mu_final = 0.0;
  int newton_steps = 0;

  FixedModel() : edges(1) {}

  PseudoPoly inverse_manifest() const { return shift_quadratic(x, m); }
  PseudoPoly sparse_poly() const { return shift_quadratic(x + low_rank, m); }
  PseudoPoly low_rank_poly() const { return shift_quadratic(low_rank, m); }
};

/// Covariance-extension optimality report for a fixed-structure fit.
struct ExtensionCertificate {
  /// Largest absolute lag mismatch of the fitted spectrum against the data
  /// lags over the edge set plus the diagonal, lags 0..n.
  double moment_gap = 0.0;
  /// Smallest eigenvalue of g (T(lags of fitted spectrum) - T(data lags)) g'.
  double latent_margin = 0.0;
  /// Grid mean of log det of the fitted manifest spectrum.
  double entropy = 0.0;
  bool ok = false;
};

/// Minimize -log det X00 + <T(R), X> over X >= 0, H >= 0 subject to the
/// complement of edges being zero in the block row of x + g' h g.
/// g may have zero rows (no latent part); it must make the latent gain
/// identifiable from the edge complement, else a SolverError is thrown.
FixedModel solve_fixed(const CovSequence& cov, const EdgeSet& edges,
                       const Matrix& g, const MaxentOptions& opts = {});

ExtensionCertificate certify_extension(const FixedModel& model,
                                       const CovSequence& cov,
                                       const FreqGrid& grid,
                                       double tol = 1e-6);

}  // namespace arlgm
