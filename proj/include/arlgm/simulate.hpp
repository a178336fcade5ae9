#pragma once

#include <cstdint>

#include "arlgm/algebra.hpp"

namespace arlgm {

/// Ground-truth autoregressive model with l latent components driving the
/// m manifest ones.  a = [A0 A1 ... An] holds the joint AR coefficients,
/// blocks (m+l) x (m+l); the process is sum_j Aj x(t-j) = eps(t) with unit
/// white noise.  The latent equations are white and the manifest equations
/// load on the latent block at lag 0 only, so the manifest block of the
/// joint inverse spectrum stays a sparse degree-n pseudo-polynomial and the
/// latent contribution is an exact rank-l pseudo-polynomial.
struct LatentArModel {
  int m = 0, l = 0, n = 0;
  Matrix a;                 // (m+l) x (m+l)(n+1)
  EdgeSet edges;            // manifest conditional-dependence support
  double companion_radius = 0.0;

  /// Inverse of the joint spectrum as a pseudo-polynomial in dim m+l.
  PseudoPoly joint_inverse() const;
  /// Sparse part: manifest block of the joint inverse.
  PseudoPoly sparse_part() const;
  /// Factor g (l x m(n+1)) of the low-rank part shift_quadratic(g'g).
  Matrix latent_factor() const;
  /// Low-rank part as a pseudo-polynomial (rank l on the circle).
  PseudoPoly low_rank_part() const;
  /// Inverse manifest spectrum sparse_part - low_rank_part.
  PseudoPoly manifest_inverse() const;
};

/// Draw a stable model whose realized manifest support matches the drawn
/// edge pattern (rejection sampling with bounded retries).
LatentArModel gen_model(int m, int l, int n, double edge_density,
                        std::uint64_t seed);

/// Simulate N manifest observations (rows = time).  burn_in < 0 selects the
/// default 10*(n+1)*ceil(1/(1-rho)) with rho the companion spectral radius.
Matrix sample(const LatentArModel& model, int big_n, std::uint64_t seed,
              int burn_in = -1);

/// Minimum-phase factor of a pseudo-polynomial positive definite on the
/// circle: returns a = [A0 ... An] (m x m(n+1)) with
/// shift_quadratic(a'a) = p, A0 invertible and the AR filter stable.
/// Bauer method: banded Cholesky of the extended block Toeplitz matrix,
/// rows iterated until the factor reproduces p within round_trip_tol.
Matrix spectral_factor(const PseudoPoly& p, double round_trip_tol = 1e-8);

/// Spectral radius of the companion matrix of the AR row a = [A0 ... An].
double companion_radius(const Matrix& a, int m);

}  // namespace arlgm
