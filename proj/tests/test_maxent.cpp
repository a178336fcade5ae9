#include <doctest.h>

#include <cmath>
#include <random>

#include "arlgm/covariance.hpp"
#include "arlgm/errors.hpp"
#include "arlgm/maxent.hpp"
#include "arlgm/simulate.hpp"
#include "test_util.hpp"

using namespace arlgm;
using testutil::random_matrix;

namespace {

CovSequence sampled_cov(int m, int n, std::uint64_t seed, int big_n = 800) {
  LatentArModel model = gen_model(std::max(m, 2), 0, std::max(n, 1), 0.5, seed);
  Matrix data = sample(model, big_n, seed + 3);
  return estimate_lags(data.leftCols(m), n);
}

Matrix yule_walker_x(const CovSequence& cov) {
  const int m = cov.lags.dim(), n = cov.lags.order();
  Matrix a_bar(m, m * (n + 1));
  a_bar.leftCols(m) = Matrix::Identity(m, m);
  if (n > 0) {
    // Solve [R1 ... Rn] = -A G with G the order-(n-1) toeplitz of the lags.
    BlockRow head(m, n - 1);
    for (int j = 0; j < n; ++j) head.block(j) = cov.lags.block(j);
    Matrix big_g = block_toeplitz(head);
    Matrix rhs(m, m * n);
    for (int j = 1; j <= n; ++j) {
      rhs.middleCols((j - 1) * m, m) = cov.lags.block(j);
    }
    Matrix a = -rhs * big_g.inverse();
    a_bar.rightCols(m * n) = a;
  }
  Matrix p = cov.lags.block(0);
  for (int j = 1; j <= n; ++j) {
    p += a_bar.middleCols(j * m, m) * cov.lags.block(j).transpose();
  }
  p = 0.5 * (p + p.transpose()).eval();
  return a_bar.transpose() * p.inverse() * a_bar;
}

}  // namespace

TEST_CASE("order-zero single-channel fit inverts the variance") {
  Matrix data(6, 1);
  data << 1.0, -2.0, 0.5, 1.5, -1.0, 0.25;
  CovSequence cov = estimate_lags(data, 0, false);
  MaxentOptions tight;
  tight.tol = 1e-10;
  tight.mu_floor = 1e-11;
  FixedModel fit = solve_fixed(cov, EdgeSet(1), Matrix::Zero(0, 1), tight);
  const double r0 = cov.lags.block(0)(0, 0);
  CHECK(fit.x(0, 0) == doctest::Approx(1.0 / r0).epsilon(1e-8));
  CHECK(fit.objective ==
        doctest::Approx(std::log(r0) + 1.0).epsilon(1e-8));
  ExtensionCertificate cert = certify_extension(fit, cov, FreqGrid(128));
  CHECK(cert.ok);
  CHECK(cert.moment_gap < 1e-8 * r0);
  CHECK(cert.entropy == doctest::Approx(std::log(r0)).epsilon(1e-8));
}

TEST_CASE("complete-support fits match the yule-walker estimate") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const int n = static_cast<int>(rng() % 3);
    CovSequence cov = sampled_cov(m, n, 500 + trial);
    FixedModel fit = solve_fixed(cov, EdgeSet::complete(m),
                                 Matrix::Zero(0, m * (n + 1)));
    Matrix x_yw = yule_walker_x(cov);
    const double scale = x_yw.cwiseAbs().maxCoeff();
    CHECK((fit.x - x_yw).cwiseAbs().maxCoeff() < 1e-5 * scale);
    ExtensionCertificate cert = certify_extension(fit, cov, FreqGrid(512));
    CHECK(cert.ok);
  }
}

TEST_CASE("sparse fits match the data moments on the support") {
  std::mt19937_64 rng(71);
  FreqGrid grid(512);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 2);
    CovSequence cov = sampled_cov(m, n, 900 + trial);
    EdgeSet edges(m);
    edges.insert(0, 1);
    if (m > 3) edges.insert(2, 3);
    FixedModel fit =
        solve_fixed(cov, edges, Matrix::Zero(0, m * (n + 1)));
    ExtensionCertificate cert = certify_extension(fit, cov, grid);
    CHECK(cert.ok);
    const double scale = cov.lags.block(0).trace();
    CHECK(cert.moment_gap < 1e-6 * scale);

    // The inverse spectrum vanishes off the support by construction.
    PseudoPoly inv = fit.inverse_manifest();
    for (auto [k, h] : edges.complement_pairs()) {
      for (int j = 0; j <= n; ++j) {
        CHECK(std::abs(inv.coef(j)(k, h)) < 1e-12);
        CHECK(std::abs(inv.coef(j)(h, k)) < 1e-12);
      }
    }
  }
}

TEST_CASE("diagonal support with a dense gain is a factor model") {
  // Static factor analysis: inverse = diagonal - g' h g.
  std::mt19937_64 rng(81);
  const int m = 4;
  Matrix g(1, m);
  g << 0.5, 0.5, 0.5, 0.5;
  Vector u(m);
  u << 1.0, 0.8, 1.2, 0.9;
  Matrix r = Matrix::Identity(m, m) + 0.8 * u * u.transpose();
  CovSequence cov{BlockRow({r}), 200, min_eig(r)};
  FixedModel fit = solve_fixed(cov, EdgeSet(m), g);
  REQUIRE(fit.l == 1);
  ExtensionCertificate cert = certify_extension(fit, cov, FreqGrid(64));
  CHECK(cert.ok);
  CHECK(cert.moment_gap < 1e-6 * r.trace());
  CHECK(cert.latent_margin > -1e-6 * r.trace());
  // x + g' h g is diagonal; x alone is not (h > 0 pulls it off-diagonal).
  Matrix sum = fit.x + fit.low_rank;
  for (int k = 0; k < m; ++k) {
    for (int h = 0; h < m; ++h) {
      if (k != h) CHECK(std::abs(sum(k, h)) < 1e-10);
    }
  }
  CHECK(fit.h(0, 0) > 0.0);
}

TEST_CASE("maximum entropy shrinks as the support grows") {
  // Growing E adds moment-matching constraints to the extension problem, so
  // the achievable entropy is nonincreasing in the support.
  CovSequence cov = sampled_cov(4, 1, 1234);
  FreqGrid grid(256);
  EdgeSet sparse(4);
  sparse.insert(0, 1);
  EdgeSet wider = sparse;
  wider.insert(1, 2);
  wider.insert(2, 3);
  Matrix g0 = Matrix::Zero(0, 8);
  const double e_sparse =
      certify_extension(solve_fixed(cov, sparse, g0), cov, grid).entropy;
  const double e_wider =
      certify_extension(solve_fixed(cov, wider, g0), cov, grid).entropy;
  const double e_full =
      certify_extension(solve_fixed(cov, EdgeSet::complete(4), g0), cov, grid)
          .entropy;
  CHECK(e_sparse >= e_wider - 1e-9);
  CHECK(e_wider >= e_full - 1e-9);
}

TEST_CASE("perturbing the fit away from the moments is flagged") {
  CovSequence cov = sampled_cov(3, 1, 777);
  EdgeSet edges(3);
  edges.insert(0, 2);
  FixedModel fit = solve_fixed(cov, edges, Matrix::Zero(0, 6));
  ExtensionCertificate good = certify_extension(fit, cov, FreqGrid(256));
  REQUIRE(good.ok);
  FixedModel bad = fit;
  bad.x(0, 0) *= 1.05;  // violates the lag-zero moment on the diagonal
  ExtensionCertificate flagged = certify_extension(bad, cov, FreqGrid(256));
  CHECK_FALSE(flagged.ok);
  CHECK(flagged.moment_gap > good.moment_gap * 100);
}

TEST_CASE("unidentifiable latent gain is rejected up front") {
  CovSequence cov = sampled_cov(3, 1, 31);
  Matrix g(1, 6);
  g << 1.0, 0.5, -0.5, 0.2, 0.1, -0.3;
  CHECK_THROWS_AS(solve_fixed(cov, EdgeSet::complete(3), g), SolverError);
  Matrix lonely = Matrix::Zero(1, 6);
  lonely(0, 0) = 1.0;
  lonely(0, 3) = 0.4;
  CHECK_THROWS_AS(solve_fixed(cov, EdgeSet(3), lonely), SolverError);
}

TEST_CASE("fits are scale-equivariant") {
  CovSequence cov = sampled_cov(3, 1, 91);
  const double c = 7.5;
  CovSequence scaled{cov.lags, cov.sample_size, cov.toeplitz_min_eig * c};
  scaled.lags *= c;
  EdgeSet edges(3);
  edges.insert(1, 2);
  FixedModel base = solve_fixed(cov, edges, Matrix::Zero(0, 6));
  FixedModel shifted = solve_fixed(scaled, edges, Matrix::Zero(0, 6));
  CHECK((shifted.x * c - base.x).cwiseAbs().maxCoeff() <
        1e-7 * base.x.cwiseAbs().maxCoeff());
  CHECK(shifted.objective - base.objective ==
        doctest::Approx(3.0 * std::log(c)).epsilon(1e-7));
}

TEST_CASE("input contracts are enforced") {
  CovSequence cov = sampled_cov(3, 1, 12);
  CHECK_THROWS_AS(solve_fixed(cov, EdgeSet(2), Matrix::Zero(0, 6)),
                  ConfigError);
  CHECK_THROWS_AS(solve_fixed(cov, EdgeSet(3), Matrix::Zero(1, 5)),
                  ConfigError);
  MaxentOptions opts;
  opts.grid_size = 2;  // too coarse to integrate order-1 moments
  CHECK_THROWS_AS(solve_fixed(cov, EdgeSet(3), Matrix::Zero(0, 6), opts),
                  ConfigError);
}
