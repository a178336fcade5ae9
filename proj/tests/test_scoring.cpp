#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "arlgm/covariance.hpp"
#include "arlgm/errors.hpp"
#include "arlgm/scoring.hpp"
#include "arlgm/simulate.hpp"
#include "test_util.hpp"

using namespace arlgm;
using testutil::random_psd;

namespace {

std::vector<CMatrix> constant_spectrum(const Matrix& s, const FreqGrid& grid) {
  return std::vector<CMatrix>(grid.size(), s.cast<std::complex<double>>());
}

double scalar_rate(double a, double b) {
  // Rate between scalar flat spectra a (reference) and b (model).
  return 0.5 * (std::log(b / a) + a / b - 1.0);
}

PseudoPoly flat(const Matrix& s) {
  PseudoPoly p(static_cast<int>(s.rows()), 0);
  p.coef(0) = s;
  return p;
}

}  // namespace

TEST_CASE("relative entropy rate is a divergence") {
  FreqGrid grid(32);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix a = random_psd(rng, 3, 0.5);
    Matrix b = random_psd(rng, 3, 0.5);
    double d = relative_entropy_rate(flat(a), constant_spectrum(b, grid), grid);
    CHECK(d >= -1e-12);
    double self =
        relative_entropy_rate(flat(a), constant_spectrum(a, grid), grid);
    CHECK(std::abs(self) < 1e-12);
    if ((a - b).norm() > 1e-6) CHECK(d > 0.0);
  }
}

TEST_CASE("relative entropy rate matches the scalar closed form") {
  FreqGrid grid(16);
  Matrix a(1, 1), b(1, 1);
  a << 2.0;
  b << 5.0;
  double d = relative_entropy_rate(flat(a), constant_spectrum(b, grid), grid);
  CHECK(d == doctest::Approx(scalar_rate(2.0, 5.0)).epsilon(1e-12));
}

TEST_CASE("relative entropy rate adds over independent channels") {
  FreqGrid grid(16);
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 2.0, 3.0;
  b.diagonal() << 1.5, 4.0;
  double d = relative_entropy_rate(flat(a), constant_spectrum(b, grid), grid);
  CHECK(d == doctest::Approx(scalar_rate(2.0, 1.5) + scalar_rate(3.0, 4.0))
                 .epsilon(1e-12));
}

TEST_CASE("relative entropy rate is scale invariant") {
  FreqGrid grid(24);
  std::mt19937_64 rng(7);
  Matrix a = random_psd(rng, 3, 0.4);
  Matrix b = random_psd(rng, 3, 0.4);
  double d = relative_entropy_rate(flat(a), constant_spectrum(b, grid), grid);
  double ds = relative_entropy_rate(flat(Matrix(6.5 * a)),
                                    constant_spectrum(6.5 * b, grid), grid);
  CHECK(ds == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("relative entropy rate validates its inputs") {
  FreqGrid grid(8);
  Matrix a = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(
      relative_entropy_rate(flat(a), constant_spectrum(a, FreqGrid(4)), grid),
      ConfigError);
  Matrix bad = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(
      relative_entropy_rate(flat(bad), constant_spectrum(a, grid), grid),
      DataError);
  CHECK_THROWS_AS(
      relative_entropy_rate(flat(a), constant_spectrum(bad, grid), grid),
      DataError);
}

TEST_CASE("complexity counts edges plus latent loadings") {
  EdgeSet empty(5);
  CHECK(complexity(empty, 0) == 0);
  CHECK(complexity(empty, 2) == 10);
  EdgeSet two(5);
  two.insert(0, 1);
  two.insert(2, 4);
  CHECK(complexity(two, 0) == 2);
  CHECK(complexity(two, 1) == 7);
  CHECK(complexity(EdgeSet::complete(4), 3) == 6 + 12);
}

TEST_CASE("log-spaced path covers the requested box") {
  RegPath path = RegPath::log_grid(0.1, 10.0, 3, 0.5, 2.0, 2);
  REQUIRE(path.points.size() == 6);
  // Lambda is the outer loop, gamma the inner one.
  CHECK(path.points[0].first == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(path.points[0].second == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(path.points[1].first == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(path.points[1].second == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(path.points[2].first == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(path.points[5].first == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(path.points[5].second == doctest::Approx(2.0).epsilon(1e-15));
  // A single point sits at the geometric midpoint.
  RegPath mid = RegPath::log_grid(0.25, 4.0, 1, 1.0, 9.0, 1);
  REQUIRE(mid.points.size() == 1);
  CHECK(mid.points[0].first == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mid.points[0].second == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(RegPath::log_grid(0.0, 1.0, 2, 1.0, 2.0, 2), ConfigError);
  CHECK_THROWS_AS(RegPath::log_grid(2.0, 1.0, 2, 1.0, 2.0, 2), ConfigError);
  CHECK_THROWS_AS(RegPath::log_grid(0.1, 1.0, 0, 1.0, 2.0, 2), ConfigError);
  CHECK_THROWS_AS(RegPath::log_grid(0.1, 1.0, 2, -1.0, 2.0, 2), ConfigError);
}

TEST_CASE("scoring reference ridges a rank-deficient correlogram") {
  // Duplicated channel: every lag matrix is rank one, so the windowed
  // correlogram is singular on the grid and gets a diagonal ridge.
  const int num = 400;
  Matrix data(num, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < num; ++t) {
    data(t, 0) = gauss(rng);
    data(t, 1) = data(t, 0);
  }
  FreqGrid grid(128);
  PseudoPoly bart = bartlett_correlogram(data, 4, true);
  double level = 1e-8 * bart.coef(0).trace() / 2;
  REQUIRE(min_eig_on_grid(bart, grid) < level);
  PseudoPoly ref = scoring_reference(data, 4, true, grid);
  CHECK((ref.coef(0) - bart.coef(0) - level * Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK((ref.coef(1) - bart.coef(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(min_eig_on_grid(ref, grid) >= 0.0);

  // Independent channels stay untouched.
  for (int t = 0; t < num; ++t) data(t, 1) = gauss(rng);
  PseudoPoly plain = bartlett_correlogram(data, 4, true);
  REQUIRE(min_eig_on_grid(plain, grid) >= 1e-8 * plain.coef(0).trace() / 2);
  PseudoPoly ref2 = scoring_reference(data, 4, true, grid);
  CHECK((ref2.coef(0) - plain.coef(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-point sweep scores and selects the fit") {
  LatentArModel truth = gen_model(3, 0, 1, 0.5, 21);
  Matrix data = sample(truth, 600, 22);
  RegPath path;
  path.points.emplace_back(2.0, 0.5);
  SweepOptions opts;
  opts.maxent.grid_size = 256;
  opts.solver.grid_size = 256;
  SweepResult result = sweep(data, path, opts);
  REQUIRE(result.selected == 0);
  const ScoredModel& sm = result.models[0];
  CHECK(sm.ok);
  CHECK(sm.status == "ok");
  CHECK(sm.cert.certified);
  CHECK(sm.ext.ok);
  CHECK(sm.reg.lambda == 2.0);
  CHECK(sm.reg.gamma == 0.5);
  CHECK(sm.d >= 0.0);
  CHECK(sm.p == complexity(sm.model.edges, sm.model.l));
  CHECK(sm.f == sm.d * sm.p);
  CHECK(result.cov.sample_size == 600);
  CHECK(result.bartlett_window == default_bartlett_order(600));
}

TEST_CASE("additive scoring uses the requested or default weight") {
  LatentArModel truth = gen_model(3, 0, 1, 0.5, 31);
  Matrix data = sample(truth, 500, 32);
  RegPath path;
  path.points.emplace_back(2.0, 0.5);
  SweepOptions opts;
  opts.maxent.grid_size = 128;
  opts.solver.grid_size = 256;
  opts.additive_score = true;
  opts.additive_alpha = 0.25;
  SweepResult fixed_alpha = sweep(data, path, opts);
  const ScoredModel& sa = fixed_alpha.models[0];
  REQUIRE(sa.ok);
  CHECK(sa.f == sa.d + 0.25 * sa.p);
  opts.additive_alpha = -1.0;  // defaults to 1/N
  SweepResult default_alpha = sweep(data, path, opts);
  const ScoredModel& sd = default_alpha.models[0];
  REQUIRE(sd.ok);
  double alpha = 1.0 / 500;
  CHECK(sd.f == sd.d + alpha * sd.p);
}

TEST_CASE("ties resolve to the earliest path point") {
  LatentArModel truth = gen_model(3, 0, 1, 0.5, 41);
  Matrix data = sample(truth, 400, 42);
  RegPath path;
  path.points.emplace_back(1.5, 0.6);
  path.points.emplace_back(1.5, 0.6);
  SweepOptions opts;
  opts.maxent.grid_size = 128;
  opts.solver.grid_size = 256;
  SweepResult result = sweep(data, path, opts);
  REQUIRE(result.models.size() == 2);
  CHECK(result.models[0].f == result.models[1].f);
  CHECK(result.selected == 0);
}

TEST_CASE("path point failures are captured in the status") {
  LatentArModel truth = gen_model(3, 0, 1, 0.5, 51);
  Matrix data = sample(truth, 400, 52);
  CovSequence cov = estimate_lags(data, 1);
  FreqGrid grid(128);
  PseudoPoly reference =
      scoring_reference(data, default_bartlett_order(400), true, grid);
  SweepOptions opts;
  opts.maxent.grid_size = 128;
  opts.solver.grid_size = 256;

  // An exhausted Newton budget leaves the solve uncertified.
  SweepOptions starved = opts;
  starved.solver.max_newton = 1;
  ScoredModel failed =
      identify_point(cov, RegParams{2.0, 0.5}, reference, starved);
  CHECK_FALSE(failed.ok);
  CHECK(failed.status == "dual solve not certified");
  CHECK_FALSE(failed.cert.certified);

  // Thrown errors become the status text.
  ScoredModel bad_reg =
      identify_point(cov, RegParams{-1.0, 0.5}, reference, opts);
  CHECK_FALSE(bad_reg.ok);
  CHECK(bad_reg.status == "solve_sl_dual: lambda and gamma must be positive");

  // Sweep-level misconfiguration throws instead.
  RegPath empty;
  CHECK_THROWS_AS(sweep(data, empty, opts), ConfigError);
  RegPath negative;
  negative.points.emplace_back(1.0, -2.0);
  CHECK_THROWS_AS(sweep(data, negative, opts), ConfigError);

  // When every point fails the sweep reports it.
  RegPath one;
  one.points.emplace_back(2.0, 0.5);
  CHECK_THROWS_AS(sweep(data, one, starved), SolverError);

  // Degenerate data fails before any point runs.
  Matrix tiny = data.topRows(3);  // too few samples for a PD block Toeplitz
  CHECK_THROWS_AS(sweep(tiny, one, opts), DataError);
}

TEST_CASE("parallel sweep matches the serial one") {
  LatentArModel truth = gen_model(3, 0, 1, 0.5, 61);
  Matrix data = sample(truth, 500, 62);
  RegPath path = RegPath::log_grid(0.5, 4.0, 2, 0.4, 1.0, 2);
  SweepOptions opts;
  opts.maxent.grid_size = 128;
  opts.solver.grid_size = 256;
  SweepResult serial = sweep(data, path, opts);
  opts.workers = 4;
  SweepResult parallel = sweep(data, path, opts);
  REQUIRE(serial.models.size() == parallel.models.size());
  CHECK(serial.selected == parallel.selected);
  for (size_t i = 0; i < serial.models.size(); ++i) {
    CHECK(serial.models[i].ok == parallel.models[i].ok);
    CHECK(serial.models[i].f == parallel.models[i].f);
    CHECK(serial.models[i].d == parallel.models[i].d);
    CHECK(serial.models[i].p == parallel.models[i].p);
  }
}
