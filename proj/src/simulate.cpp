#include "arlgm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "arlgm/errors.hpp"

namespace arlgm {

namespace {

/// mt19937_64 with hand-rolled Box-Muller so streams are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    // strictly inside (0, 1)
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

Matrix joint_gram(const Matrix& a) { return a.transpose() * a; }

}  // namespace

PseudoPoly LatentArModel::joint_inverse() const {
  return shift_quadratic(joint_gram(a), m + l);
}

PseudoPoly LatentArModel::sparse_part() const {
  PseudoPoly joint = joint_inverse();
  PseudoPoly out(m, n);
  for (int j = 0; j <= n; ++j)
    out.coef(j) = joint.coef(j).topLeftCorner(m, m);
  return out;
}

Matrix LatentArModel::latent_factor() const {
  if (l == 0) return Matrix::Zero(0, m * (n + 1));
  const int p = m + l;
  // Manifest-equation blocks of A at each lag, manifest columns only.
  Matrix amm(m, m * (n + 1));
  for (int j = 0; j <= n; ++j)
    amm.middleCols(j * m, m) = a.block(0, j * p, m, m);
  const Matrix aml = a.block(0, m, m, l);      // lag-0 latent loadings
  const Matrix all = a.block(m, m, l, l);      // latent white-noise gain
  Matrix gain = aml.transpose() * aml + all.transpose() * all;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gain);
  Matrix isqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  return isqrt * aml.transpose() * amm;
}

PseudoPoly LatentArModel::low_rank_part() const {
  Matrix g = latent_factor();
  return shift_quadratic(g.transpose() * g, m);
}

PseudoPoly LatentArModel::manifest_inverse() const {
  PseudoPoly p = sparse_part();
  p -= low_rank_part();
  return p;
}

LatentArModel gen_model(int m, int l, int n, double edge_density,
                        std::uint64_t seed) {
  if (m < 2 || l < 0 || n < 0)
    throw ConfigError("gen_model: need m >= 2, l >= 0, n >= 0");
  if (edge_density < 0.0 || edge_density > 1.0)
    throw ConfigError("gen_model: edge_density must lie in [0, 1]");
  const int p = m + l;
  const int desired =
      static_cast<int>(std::lround(edge_density * m * (m - 1) / 2.0));
  Rng rng(seed);

  for (int attempt = 0; attempt < 64; ++attempt) {
    // Each manifest equation couples to a set of partner columns; the
    // realized support is the co-occurrence closure of those rows.
    std::vector<std::vector<int>> partners(m);
    EdgeSet drawn(m);
    std::vector<char> touched(m, 0);
    int placed = 0, guard = 0;
    while (placed < desired && guard++ < 200 * (desired + 1)) {
      // Prefer rows and partners not yet on any edge: at low density the
      // drawn graph is a matching, which keeps distinct edges conditionally
      // separated instead of chained through shared nodes.
      int k = -1;
      for (int r = 0; r < m; ++r)
        if (!touched[r]) {
          k = r;
          break;
        }
      if (k < 0) k = placed % m;
      std::vector<int> fresh;
      for (int r = 0; r < m; ++r)
        if (r != k && !touched[r]) fresh.push_back(r);
      int h;
      if (!fresh.empty()) {
        h = fresh[rng.uniform_int(0, static_cast<int>(fresh.size()) - 1)];
      } else {
        h = rng.uniform_int(0, m - 2);
        if (h >= k) ++h;
      }
      if (drawn.contains(k, h)) continue;
      partners[k].push_back(h);
      drawn.insert(k, h);
      touched[k] = 1;
      touched[h] = 1;
      ++placed;
    }
    if (placed < desired) continue;
    EdgeSet predicted(m);
    for (int k = 0; k < m; ++k) {
      std::vector<int> cols = partners[k];
      cols.push_back(k);
      for (size_t i = 0; i < cols.size(); ++i)
        for (size_t j = i + 1; j < cols.size(); ++j)
          predicted.insert(cols[i], cols[j]);
    }

    Matrix a = Matrix::Zero(p, p * (n + 1));
    // Lag 0: unit diagonal, contemporaneous partner couplings, dense latent
    // loadings in the manifest equations, white latent equations.  Loadings
    // share a sign so each latent behaves like a common mode, which keeps the
    // low-rank part well separated from the sparse one.
    a.block(0, 0, p, p).setIdentity();
    // Partner couplings are drawn negative while loadings are positive, so a
    // pair's direct coupling reinforces (never cancels) the factor-induced
    // term in the inverse spectrum; cancellation would make the edge
    // statistically invisible at moderate sample sizes.
    for (int k = 0; k < m; ++k)
      for (int h : partners[k]) a(k, h) = -rng.uniform(0.6, 0.75);
    for (int k = 0; k < m; ++k)
      for (int q = 0; q < l; ++q) a(k, m + q) = rng.uniform(0.65, 0.95);
    // Lags j >= 1: manifest diagonal poles plus couplings on the same
    // partner columns (keeping the co-occurrence pattern fixed).  The latent
    // column stays strictly contemporaneous: the factor still picks up color
    // through the manifest dynamics, while the exact inverse keeps the
    // sparse-plus-low-rank polynomial form.
    for (int j = 1; j <= n; ++j) {
      for (int k = 0; k < m; ++k) {
        a(k, j * p + k) = rng.sign() * rng.uniform(0.2, 0.5);
        for (int h : partners[k])
          a(k, j * p + h) = rng.sign() * rng.uniform(0.3, 0.45);
      }
    }

    if (std::abs(a.block(0, 0, p, p).determinant()) < 1e-6) continue;

    LatentArModel model{m, l, n, a, predicted, 0.0};
    if (n > 0) {
      for (int scaled = 0; scaled < 32; ++scaled) {
        model.companion_radius = companion_radius(model.a, p);
        if (model.companion_radius < 0.95) break;
        for (int j = 1; j <= n; ++j)
          model.a.middleCols(j * p, p) *= 0.85;
      }
      if (model.companion_radius >= 0.95) continue;
    }

    // Realized support must match the predicted pattern: structural zeros
    // are exact, so only cancellations on predicted edges can break it.
    PseudoPoly sigma = model.sparse_part();
    double scale = sigma.coef().max_abs();
    bool ok = true;
    for (auto [k, h] : predicted.pairs()) {
      double mag = 0.0;
      for (int j = 0; j <= n; ++j)
        mag = std::max({mag, std::abs(sigma.coef(j)(k, h)),
                        std::abs(sigma.coef(j)(h, k))});
      if (mag < 1e-3 * scale) { ok = false; break; }
    }
    if (!ok) continue;

    FreqGrid grid(std::max(64, 4 * n + 4));
    if (min_eig_on_grid(model.joint_inverse(), grid) <= 0.0) continue;
    return model;
  }
  throw SolverError("gen_model: no admissible draw within retry budget");
}

Matrix sample(const LatentArModel& model, int big_n, std::uint64_t seed,
              int burn_in) {
  if (big_n < 1) throw ConfigError("sample: need a positive sample size");
  const int p = model.m + model.l;
  const int n = model.n;
  if (burn_in < 0) {
    double rho = std::min(model.companion_radius, 0.999);
    burn_in = 10 * (n + 1) *
              static_cast<int>(std::ceil(1.0 / (1.0 - rho)));
  }
  Rng rng(seed);
  Eigen::PartialPivLU<Matrix> a0(model.a.leftCols(p));
  std::vector<Vector> hist(n + 1, Vector::Zero(p));
  Matrix out(big_n, model.m);
  Vector rhs(p);
  for (int t = -burn_in; t < big_n; ++t) {
    for (int i = 0; i < p; ++i) rhs(i) = rng.normal();
    for (int j = 1; j <= n; ++j)
      rhs -= model.a.middleCols(j * p, p) * hist[j - 1];
    Vector x = a0.solve(rhs);
    for (int j = n; j >= 1; --j) hist[j] = hist[j - 1];
    if (n >= 0) hist[0] = x;
    if (t >= 0) out.row(t) = x.head(model.m).transpose();
  }
  return out;
}

Matrix spectral_factor(const PseudoPoly& p, double round_trip_tol) {
  const int m = p.dim(), n = p.order();
  FreqGrid grid(std::max(128, 4 * n + 4));
  if (min_eig_on_grid(p, grid) <= 0.0)
    throw DataError("spectral_factor: input not positive definite on the circle");
  const double scale = std::max(1.0, p.coef().max_abs());

  // Banded Cholesky of the extended block Toeplitz matrix, keeping a ring
  // of the last n+1 block rows; rows converge to the minimum-phase factor.
  const int band = n + 1;
  const int max_rows = 65536;
  std::vector<std::vector<Matrix>> ring(
      band, std::vector<Matrix>(band, Matrix::Zero(m, m)));
  auto row_slot = [&](int s) -> std::vector<Matrix>& { return ring[s % band]; };
  // row s stores L[s, s-n .. s] in slots 0..n
  auto get_block = [&](int s, int t) -> const Matrix& {
    return row_slot(s)[t - (s - n)];
  };
  Matrix a;
  int check_from = 2 * band + 2;
  for (int s = 0; s < max_rows; ++s) {
    std::vector<Matrix>& row = row_slot(s);
    for (int t = std::max(0, s - n); t <= s; ++t) {
      Matrix acc = (t == s) ? p.coef(0) : Matrix(p.coef(s - t).transpose());
      for (int u = std::max({0, s - n, t - n}); u < t; ++u)
        acc -= get_block(s, u) * get_block(t, u).transpose();
      if (t < s) {
        const Matrix& ltt = get_block(t, t);
        row[t - (s - n)] = ltt.template triangularView<Eigen::Lower>()
                               .solve(acc.transpose())
                               .transpose();
      } else {
        Eigen::LLT<Matrix> llt(acc);
        if (llt.info() != Eigen::Success)
          throw SolverError("spectral_factor: Cholesky breakdown");
        row[n] = llt.matrixL();
      }
    }
    if (s >= check_from && (s - check_from) % 4 == 0) {
      // Candidate factor from rows s-n .. s: Aj = L[s-n+j, s-n]^T.
      a.resize(m, m * band);
      for (int j = 0; j <= n; ++j)
        a.middleCols(j * m, m) = get_block(s - n + j, s - n).transpose();
      PseudoPoly back = shift_quadratic(a.transpose() * a, m);
      back -= p;
      if (back.coef().max_abs() <= round_trip_tol * scale) return a;
    }
  }
  throw SolverError("spectral_factor: truncation budget exhausted");
}

double companion_radius(const Matrix& a, int m) {
  const int n = static_cast<int>(a.cols()) / m - 1;
  if (n == 0) return 0.0;
  Eigen::PartialPivLU<Matrix> a0(a.leftCols(m));
  Matrix comp = Matrix::Zero(m * n, m * n);
  for (int j = 1; j <= n; ++j)
    comp.block(0, (j - 1) * m, m, m) = -a0.solve(a.middleCols(j * m, m));
  if (n > 1)
    comp.block(m, 0, m * (n - 1), m * (n - 1)).setIdentity();
  return comp.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace arlgm
