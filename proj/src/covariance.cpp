#include "arlgm/covariance.hpp"

#include <cmath>
#include <stdexcept>

#include "arlgm/errors.hpp"

namespace arlgm {

namespace {

BlockRow biased_lags(const Matrix& data, int n, bool subtract_mean) {
  const int big_n = static_cast<int>(data.rows());
  const int m = static_cast<int>(data.cols());
  if (m < 1) throw ConfigError("estimate_lags: empty data");
  if (n < 0) throw ConfigError("estimate_lags: negative order");
  if (big_n <= n)
    throw DataError("estimate_lags: need more samples than lags");
  Matrix x = data;
  if (subtract_mean) x.rowwise() -= data.colwise().mean();
  std::vector<Matrix> blocks;
  blocks.reserve(n + 1);
  for (int j = 0; j <= n; ++j) {
    Matrix r = Matrix::Zero(m, m);
    for (int t = 0; t + j < big_n; ++t)
      r += x.row(t + j).transpose() * x.row(t);
    r /= static_cast<double>(big_n);
    if (j == 0) r = 0.5 * (r + r.transpose()).eval();
    blocks.push_back(std::move(r));
  }
  return BlockRow(std::move(blocks));
}

}  // namespace

CovSequence estimate_lags(const Matrix& data, int n, bool subtract_mean) {
  CovSequence cov{biased_lags(data, n, subtract_mean),
                  static_cast<int>(data.rows()), 0.0};
  cov.toeplitz_min_eig = min_eig(block_toeplitz(cov.lags));
  if (!(cov.toeplitz_min_eig > 0.0))
    throw DataError(
        "estimate_lags: sample covariance block Toeplitz matrix is not "
        "positive definite; data are degenerate or too short");
  return cov;
}

PseudoPoly correlogram(const CovSequence& cov) {
  return PseudoPoly(cov.lags);
}

PseudoPoly bartlett_correlogram(const Matrix& data, int window,
                                bool subtract_mean) {
  if (window < 0)
    throw ConfigError("bartlett_correlogram: negative window");
  BlockRow lags = biased_lags(data, window, subtract_mean);
  for (int j = 0; j <= window; ++j)
    lags.block(j) *= 1.0 - static_cast<double>(j) / (window + 1);
  return PseudoPoly(std::move(lags));
}

int default_bartlett_order(int sample_size) {
  if (sample_size < 1)
    throw ConfigError("default_bartlett_order: empty sample");
  return static_cast<int>(std::ceil(std::cbrt(static_cast<double>(sample_size))));
}

Matrix log_returns(const Matrix& prices) {
  const int rows = static_cast<int>(prices.rows());
  const int cols = static_cast<int>(prices.cols());
  if (rows < 2) throw DataError("log_returns: need two prices");
  if ((prices.array() <= 0.0).any())
    throw DataError("log_returns: prices must be positive");
  Matrix r(rows - 1, cols);
  for (int t = 1; t < rows; ++t)
    for (int c = 0; c < cols; ++c)
      r(t - 1, c) = 100.0 * (std::log(prices(t, c)) - std::log(prices(t - 1, c)));
  return r;
}

}  // namespace arlgm
