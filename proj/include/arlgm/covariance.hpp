#pragma once

#include "arlgm/algebra.hpp"

namespace arlgm {

/// Biased sample covariance lags of a multivariate series.
/// lags holds [R0 R1 ... Rn] with Rj = (1/N) sum_t x(t+j) x(t)'.
struct CovSequence {
  BlockRow lags;
  int sample_size = 0;
  /// Smallest eigenvalue of the block Toeplitz matrix built from lags.
  double toeplitz_min_eig = 0.0;
};

/// Estimate lags 0..n from data (rows = time, cols = variables).
/// The sample mean is subtracted unless subtract_mean is false.
/// Throws if the block Toeplitz matrix of the lags is not positive definite.
CovSequence estimate_lags(const Matrix& data, int n, bool subtract_mean = true);

/// Windowless correlogram sum_{|j|<=n} e^{-i j theta} Rj; possibly indefinite.
PseudoPoly correlogram(const CovSequence& cov);

/// Bartlett-windowed correlogram with weights 1 - |j|/(M+1), lags 0..M;
/// positive semidefinite on any grid by construction.
PseudoPoly bartlett_correlogram(const Matrix& data, int window,
                                bool subtract_mean = true);

/// Default Bartlett window order ceil(N^(1/3)).
int default_bartlett_order(int sample_size);

/// Percent log returns 100*(log p_t - log p_{t-1}) columnwise.
/// Prices must be strictly positive; a repeated price yields an exact zero.
Matrix log_returns(const Matrix& prices);

}  // namespace arlgm
