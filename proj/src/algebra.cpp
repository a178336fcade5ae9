#include "arlgm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace arlgm {

namespace {

constexpr double kAsymmetryTol = 1e-8;

void check_square(const Matrix& b, int m, const char* what) {
  if (b.rows() != m || b.cols() != m)
    throw std::invalid_argument(std::string(what) + ": block size mismatch");
}

}  // namespace

FreqGrid::FreqGrid(int size) {
  if (size < 1) throw std::invalid_argument("FreqGrid: size must be positive");
  theta_.resize(size);
  for (int k = 0; k < size; ++k)
    theta_[k] = 2.0 * std::numbers::pi * k / size - std::numbers::pi;
}

EdgeSet::EdgeSet(int m) : m_(m), mask_(static_cast<size_t>(m) * m, 0) {
  if (m < 1) throw std::invalid_argument("EdgeSet: dimension must be positive");
}

EdgeSet EdgeSet::complete(int m) {
  EdgeSet e(m);
  for (int k = 0; k < m; ++k)
    for (int h = k + 1; h < m; ++h) e.insert(k, h);
  return e;
}

void EdgeSet::insert(int k, int h) {
  if (k < 0 || h < 0 || k >= m_ || h >= m_)
    throw std::invalid_argument("EdgeSet: index out of range");
  if (k == h) return;
  mask_[static_cast<size_t>(k) * m_ + h] = 1;
  mask_[static_cast<size_t>(h) * m_ + k] = 1;
}

bool EdgeSet::contains(int k, int h) const {
  if (k == h) return true;
  return mask_[static_cast<size_t>(k) * m_ + h] != 0;
}

int EdgeSet::count() const {
  int c = 0;
  for (int k = 0; k < m_; ++k)
    for (int h = k + 1; h < m_; ++h)
      if (mask_[static_cast<size_t>(k) * m_ + h]) ++c;
  return c;
}

std::vector<std::pair<int, int>> EdgeSet::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < m_; ++k)
    for (int h = k + 1; h < m_; ++h)
      if (mask_[static_cast<size_t>(k) * m_ + h]) out.emplace_back(k, h);
  return out;
}

std::vector<std::pair<int, int>> EdgeSet::complement_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < m_; ++k)
    for (int h = k + 1; h < m_; ++h)
      if (!mask_[static_cast<size_t>(k) * m_ + h]) out.emplace_back(k, h);
  return out;
}

bool EdgeSet::operator==(const EdgeSet& other) const {
  return m_ == other.m_ && mask_ == other.mask_;
}

BlockRow::BlockRow(int m, int n) : m_(m), n_(n) {
  if (m < 1 || n < 0) throw std::invalid_argument("BlockRow: bad dimensions");
  blocks_.assign(n + 1, Matrix::Zero(m, m));
}

BlockRow::BlockRow(std::vector<Matrix> blocks) {
  if (blocks.empty()) throw std::invalid_argument("BlockRow: no blocks");
  m_ = static_cast<int>(blocks[0].rows());
  n_ = static_cast<int>(blocks.size()) - 1;
  for (const Matrix& b : blocks) check_square(b, m_, "BlockRow");
  double scale = std::max(1.0, blocks[0].cwiseAbs().maxCoeff());
  double asym = (blocks[0] - blocks[0].transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryTol * scale)
    throw std::invalid_argument("BlockRow: leading block is not symmetric");
  blocks[0] = 0.5 * (blocks[0] + blocks[0].transpose()).eval();
  blocks_ = std::move(blocks);
}

double BlockRow::dot(const BlockRow& other) const {
  if (m_ != other.m_ || n_ != other.n_)
    throw std::invalid_argument("BlockRow::dot: shape mismatch");
  double s = 0.0;
  for (int j = 0; j <= n_; ++j)
    s += blocks_[j].cwiseProduct(other.blocks_[j]).sum();
  return s;
}

double BlockRow::max_abs() const {
  double v = 0.0;
  for (const Matrix& b : blocks_) v = std::max(v, b.cwiseAbs().maxCoeff());
  return v;
}

BlockRow& BlockRow::operator+=(const BlockRow& other) {
  if (m_ != other.m_ || n_ != other.n_)
    throw std::invalid_argument("BlockRow: shape mismatch");
  for (int j = 0; j <= n_; ++j) blocks_[j] += other.blocks_[j];
  return *this;
}

BlockRow& BlockRow::operator-=(const BlockRow& other) {
  if (m_ != other.m_ || n_ != other.n_)
    throw std::invalid_argument("BlockRow: shape mismatch");
  for (int j = 0; j <= n_; ++j) blocks_[j] -= other.blocks_[j];
  return *this;
}

BlockRow& BlockRow::operator*=(double s) {
  for (Matrix& b : blocks_) b *= s;
  return *this;
}

CMatrix PseudoPoly::eval(double theta) const {
  const int m = dim();
  CMatrix v = coef_.block(0).cast<std::complex<double>>();
  for (int j = 1; j <= order(); ++j) {
    std::complex<double> w = std::exp(std::complex<double>(0.0, -j * theta));
    v += w * coef_.block(j).cast<std::complex<double>>();
    v += std::conj(w) * coef_.block(j).transpose().cast<std::complex<double>>();
  }
  // Hermitian by construction up to roundoff.
  return 0.5 * (v + v.adjoint().eval());
}

std::vector<CMatrix> PseudoPoly::eval(const FreqGrid& grid) const {
  std::vector<CMatrix> out;
  out.reserve(grid.size());
  for (int k = 0; k < grid.size(); ++k) out.push_back(eval(grid.theta(k)));
  return out;
}

PseudoPoly& PseudoPoly::operator+=(const PseudoPoly& other) {
  coef_ += other.coef_;
  return *this;
}

PseudoPoly& PseudoPoly::operator-=(const PseudoPoly& other) {
  coef_ -= other.coef_;
  return *this;
}

Matrix block_toeplitz(const BlockRow& y) {
  const int m = y.dim(), n = y.order();
  Matrix t = Matrix::Zero(m * (n + 1), m * (n + 1));
  for (int s = 0; s <= n; ++s)
    for (int u = 0; u <= n; ++u) {
      if (u >= s)
        t.block(s * m, u * m, m, m) = y.block(u - s);
      else
        t.block(s * m, u * m, m, m) = y.block(s - u).transpose();
    }
  return t;
}

BlockRow toeplitz_adjoint(const Matrix& x, int m) {
  if (x.rows() != x.cols() || x.rows() % m != 0)
    throw std::invalid_argument("toeplitz_adjoint: bad dimensions");
  const int n = static_cast<int>(x.rows()) / m - 1;
  BlockRow d(m, n);
  for (int h = 0; h <= n; ++h) d.block(0) += x.block(h * m, h * m, m, m);
  d.block(0) = 0.5 * (d.block(0) + d.block(0).transpose()).eval();
  for (int j = 1; j <= n; ++j)
    for (int h = 0; h + j <= n; ++h)
      d.block(j) += 2.0 * x.block(h * m, (h + j) * m, m, m);
  return d;
}

PseudoPoly shift_quadratic(const Matrix& x, int m) {
  BlockRow d = toeplitz_adjoint(x, m);
  for (int j = 1; j <= d.order(); ++j) d.block(j) *= 0.5;
  return PseudoPoly(std::move(d));
}

BlockRow project_edges(const BlockRow& y, const EdgeSet& edges,
                       bool keep_complement) {
  if (y.dim() != edges.dim())
    throw std::invalid_argument("project_edges: dimension mismatch");
  BlockRow out = y;
  for (int j = 0; j <= y.order(); ++j)
    for (int k = 0; k < y.dim(); ++k)
      for (int h = 0; h < y.dim(); ++h) {
        bool in_set = edges.contains(k, h);
        if (in_set == keep_complement) out.block(j)(k, h) = 0.0;
      }
  return out;
}

PseudoPoly project_edges(const PseudoPoly& p, const EdgeSet& edges,
                         bool keep_complement) {
  return PseudoPoly(project_edges(p.coef(), edges, keep_complement));
}

CMatrix grid_mean(const std::vector<CMatrix>& values) {
  if (values.empty()) throw std::invalid_argument("grid_mean: empty");
  CMatrix s = CMatrix::Zero(values[0].rows(), values[0].cols());
  for (const CMatrix& v : values) s += v;
  return s / static_cast<double>(values.size());
}

Matrix lag_mean(const std::vector<CMatrix>& values, const FreqGrid& grid,
                int j) {
  if (static_cast<int>(values.size()) != grid.size())
    throw std::invalid_argument("lag_mean: grid size mismatch");
  CMatrix s = CMatrix::Zero(values[0].rows(), values[0].cols());
  for (int k = 0; k < grid.size(); ++k) {
    std::complex<double> w =
        std::exp(std::complex<double>(0.0, j * grid.theta(k)));
    s += w * values[k];
  }
  return (s / static_cast<double>(grid.size())).real();
}

Matrix toeplitz_integral(const std::vector<CMatrix>& values,
                         const FreqGrid& grid, int n) {
  const int m = static_cast<int>(values[0].rows());
  std::vector<Matrix> lags;
  lags.reserve(n + 1);
  for (int j = 0; j <= n; ++j) lags.push_back(lag_mean(values, grid, j));
  lags[0] = 0.5 * (lags[0] + lags[0].transpose()).eval();
  Matrix t = Matrix::Zero(m * (n + 1), m * (n + 1));
  for (int s = 0; s <= n; ++s)
    for (int u = 0; u <= n; ++u) {
      if (u >= s)
        t.block(s * m, u * m, m, m) = lags[u - s];
      else
        t.block(s * m, u * m, m, m) = lags[s - u].transpose();
    }
  return t;
}

double min_eig_on_grid(const PseudoPoly& p, const FreqGrid& grid) {
  double lo = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<CMatrix> es;
  for (int k = 0; k < grid.size(); ++k) {
    es.compute(p.eval(grid.theta(k)), Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

bool is_psd_on_grid(const PseudoPoly& p, const FreqGrid& grid, double tol) {
  return min_eig_on_grid(p, grid) >= -tol;
}

double min_eig(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace arlgm
