#pragma once

#include <random>

#include "arlgm/algebra.hpp"

namespace testutil {

using arlgm::BlockRow;
using arlgm::Matrix;

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = normal(rng);
  return a;
}

inline Matrix random_sym(std::mt19937_64& rng, int d) {
  Matrix a = random_matrix(rng, d, d);
  return 0.5 * (a + a.transpose());
}

inline Matrix random_psd(std::mt19937_64& rng, int d, double ridge = 0.0) {
  Matrix a = random_matrix(rng, d, d);
  return a * a.transpose() / d + ridge * Matrix::Identity(d, d);
}

inline BlockRow random_block_row(std::mt19937_64& rng, int m, int n) {
  BlockRow y(m, n);
  y.block(0) = random_sym(rng, m);
  for (int j = 1; j <= n; ++j) y.block(j) = random_matrix(rng, m, m);
  return y;
}

}  // namespace testutil
