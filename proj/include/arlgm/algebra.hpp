#pragma once

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace arlgm {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;

/// Uniform frequency grid theta_k = 2*pi*k/size - pi, k = 0..size-1.
/// The quadrature rule everywhere is the plain grid mean, which integrates
/// trigonometric polynomials of degree < size exactly over [-pi, pi).
class FreqGrid {
 public:
  explicit FreqGrid(int size = 512);

  int size() const { return static_cast<int>(theta_.size()); }
  double theta(int k) const { return theta_[k]; }
  const std::vector<double>& points() const { return theta_; }

 private:
  std::vector<double> theta_;
};

/// Symmetric set of unordered off-diagonal pairs over {0..m-1}.
/// Diagonal pairs are implicitly always present.
class EdgeSet {
 public:
  explicit EdgeSet(int m);
  static EdgeSet complete(int m);

  int dim() const { return m_; }
  void insert(int k, int h);
  bool contains(int k, int h) const;
  /// Number of unordered off-diagonal pairs in the set.
  int count() const;
  /// Sorted unordered pairs (k < h) present in the set.
  std::vector<std::pair<int, int>> pairs() const;
  /// Sorted unordered pairs (k < h) absent from the set.
  std::vector<std::pair<int, int>> complement_pairs() const;

  bool operator==(const EdgeSet& other) const;
  bool operator!=(const EdgeSet& other) const { return !(*this == other); }

 private:
  int m_;
  std::vector<char> mask_;  // row-major m*m, symmetric
};

/// First block row [Y0 Y1 ... Yn] of a symmetric block Toeplitz matrix,
/// blocks m x m.  Y0 is symmetrized silently on construction; relative
/// asymmetry beyond 1e-8 is rejected.
class BlockRow {
 public:
  BlockRow(int m, int n);
  explicit BlockRow(std::vector<Matrix> blocks);

  int dim() const { return m_; }
  int order() const { return n_; }
  Matrix& block(int j) { return blocks_[j]; }
  const Matrix& block(int j) const { return blocks_[j]; }

  /// Trace inner product sum_j <Y_j, Z_j>_F.
  double dot(const BlockRow& other) const;
  double max_abs() const;

  BlockRow& operator+=(const BlockRow& other);
  BlockRow& operator-=(const BlockRow& other);
  BlockRow& operator*=(double s);

 private:
  int m_, n_;
  std::vector<Matrix> blocks_;
};

/// Hermitian matrix pseudo-polynomial
///   P(theta) = C0 + sum_{j=1..n} e^{-i j theta} Cj + e^{+i j theta} Cj^T
/// stored through its coefficient block row [C0 C1 ... Cn], C0 symmetric.
class PseudoPoly {
 public:
  PseudoPoly(int m, int n) : coef_(m, n) {}
  explicit PseudoPoly(BlockRow coef) : coef_(std::move(coef)) {}

  int dim() const { return coef_.dim(); }
  int order() const { return coef_.order(); }
  BlockRow& coef() { return coef_; }
  const BlockRow& coef() const { return coef_; }
  Matrix& coef(int j) { return coef_.block(j); }
  const Matrix& coef(int j) const { return coef_.block(j); }

  CMatrix eval(double theta) const;
  std::vector<CMatrix> eval(const FreqGrid& grid) const;

  PseudoPoly& operator+=(const PseudoPoly& other);
  PseudoPoly& operator-=(const PseudoPoly& other);

 private:
  BlockRow coef_;
};

/// Symmetric block Toeplitz matrix of size m(n+1) with first block row y.
Matrix block_toeplitz(const BlockRow& y);

/// Adjoint of block_toeplitz under the trace pairing:
///   D0(X) = sum_h X_hh,   Dj(X) = 2 sum_h X_{h,h+j}.
BlockRow toeplitz_adjoint(const Matrix& x, int m);

/// Coefficients of the quadratic form Delta(theta) X Delta(theta)^* where
/// Delta(theta) = [I, e^{i theta} I, ..., e^{i n theta} I]:
/// C0 = D0(X), Cj = Dj(X)/2.
PseudoPoly shift_quadratic(const Matrix& x, int m);

/// Zero the entries outside the edge set (diagonal always kept), or with
/// keep_complement the entries inside it (diagonal zeroed).
BlockRow project_edges(const BlockRow& y, const EdgeSet& edges,
                       bool keep_complement = false);
PseudoPoly project_edges(const PseudoPoly& p, const EdgeSet& edges,
                         bool keep_complement = false);

/// Grid mean of matrix samples.
CMatrix grid_mean(const std::vector<CMatrix>& values);

/// Real part of the grid mean of e^{i j theta} * value(theta); the lag
/// functional of a spectral density sampled on the grid.
Matrix lag_mean(const std::vector<CMatrix>& values, const FreqGrid& grid,
                int j);

/// Block matrix of lag means [integral of e^{i(t-s)theta} value], the grid
/// version of the quadratic integral of Delta^* value Delta.
Matrix toeplitz_integral(const std::vector<CMatrix>& values,
                         const FreqGrid& grid, int n);

double min_eig_on_grid(const PseudoPoly& p, const FreqGrid& grid);
bool is_psd_on_grid(const PseudoPoly& p, const FreqGrid& grid,
                    double tol = 0.0);

/// Smallest eigenvalue of a symmetric matrix.
double min_eig(const Matrix& x);

}  // namespace arlgm
