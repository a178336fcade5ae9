#pragma once

#include <vector>

#include "arlgm/algebra.hpp"
#include "arlgm/maxent.hpp"

namespace arlgm {

/// Joint (manifest + latent) spectrum in inverse-block form.  The inverse
/// joint spectrum at theta is
///   [ sigma(theta)          (w Delta(theta)*)^H ]
///   [ w Delta(theta)*        I                  ]
/// with sigma the sparse part and w the latent loading h^{1/2} g after
/// dropping numerically null gain directions.
struct JointSpectrum {
  int m = 0, n = 0, l = 0;  // l = effective latent count
  int dropped = 0;          // null gain directions removed from h
  PseudoPoly sigma;         // m x m sparse part
  Matrix w;                 // l x m(n+1)

  JointSpectrum() : sigma(1, 0) {}

  int joint_dim() const { return m + l; }
  /// Inverse joint spectrum at theta, (m+l) x (m+l) Hermitian.
  CMatrix inverse_at(double theta) const;
  /// Joint spectrum at theta.
  CMatrix at(double theta) const;
  std::vector<CMatrix> eval(const FreqGrid& grid) const;
  /// Manifest spectrum values (top-left m x m block of the joint spectrum).
  std::vector<CMatrix> eval_manifest(const FreqGrid& grid) const;
};

JointSpectrum assemble_joint(const FixedModel& model);

/// Inverse spectrum normalized to unit diagonal at every grid point:
/// diag(U)^{-1/2} U diag(U)^{-1/2} with U the inverse joint spectrum.
std::vector<CMatrix> partial_coherence(const JointSpectrum& joint,
                                       const FreqGrid& grid);

/// Entrywise mean magnitude of the partial coherence over the grid.
Matrix coherence_mean_abs(const std::vector<CMatrix>& coherence);

/// Normalized spectral-norm error curves against a known truth; a curve is
/// absent when the corresponding truth vanishes identically.
struct ErrorCurves {
  bool sigma_defined = false;
  bool lambda_defined = false;
  std::vector<double> e_sigma;
  std::vector<double> e_lambda;
};

ErrorCurves spectral_errors(const PseudoPoly& sigma_true,
                            const PseudoPoly& lambda_true,
                            const PseudoPoly& sigma_est,
                            const PseudoPoly& lambda_est,
                            const FreqGrid& grid);

}  // namespace arlgm
