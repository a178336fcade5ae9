#pragma once

#include <string>
#include <utility>
#include <vector>

#include "arlgm/covariance.hpp"

namespace arlgm {

struct RegParams {
  double lambda = 1.0;  // low-rank weight
  double gamma = 1.0;   // sparsity weight relative to lambda
  double lambda_gamma() const { return lambda * gamma; }
};

struct SolverOptions {
  double mu_init = 1.0;
  double mu_factor = 10.0;
  double mu_min = 1e-8;     // nominal end of the barrier schedule
  double mu_floor = 1e-12;  // continuation floor while the gap is uncertified
  double tol = 1e-6;        // duality-gap / KKT tolerance
  int max_newton = 800;     // total Newton-step budget
  int grid_size = 512;
  double rank_tol = 1e-5;     // scaled by lambda: null-space / activity cut
  double support_tol = 1e-5;  // scaled by max entry: support threshold
  bool trace = false;
  std::string trace_path;  // empty -> stderr
};

struct DualCertificate {
  double gap = 0.0;           // primal minus dual objective
  double comp_slack_x = 0.0;  // <U, X>
  double comp_slack_l = 0.0;  // <V, L>
  double min_eig_u = 0.0;
  double min_eig_v = 0.0;
  double group_margin = 0.0;  // min over pairs of lambda*gamma - group sum
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  bool certified = false;
};

/// Solution of
///   max log det W + m
///   s.t. T(R) + T(Z) >= blockdiag(W, 0),  lambda I + T(Z) >= 0,
///        diag(Zj) = 0,  sum_j |Zj_kh| + |Zj_hk| <= lambda*gamma  (k != h).
struct DualSolution {
  Matrix w;
  BlockRow z;
  double objective = 0.0;  // log det W + m
  double mu_final = 0.0;
  int newton_steps = 0;
  DualCertificate cert;
};

struct LatentStructure {
  Matrix g;         // l x m(n+1), orthonormal rows, ascending eigenvalues
  Matrix h;         // l x l PSD gram of the latent variables
  Matrix low_rank;  // g' h g, size m(n+1)
  int l = 0;
  bool unique = false;  // recovery system had full column rank
  std::vector<std::pair<int, int>> inactive;  // strictly slack group pairs
};

/// Group l1-of-linf norm over unordered off-diagonal pairs:
/// sum_{k<h} max_j max(|Yj_kh|, |Yj_hk|).
double h_inf_norm(const BlockRow& y);

/// Grid integral of the singular values of shift_quadratic(low_rank);
/// equals tr(low_rank) when the argument is PSD.
double low_rank_penalty(const Matrix& low_rank, int m, const FreqGrid& grid);

DualSolution solve_sl_dual(const CovSequence& cov, const RegParams& reg,
                           const SolverOptions& opts = {});

/// Yule-Walker recovery: solve (T(R) + T(Z)) B' = [C; 0] with B0 = I and
/// return X = B' C^{-1} B, a PSD matrix of rank m.
Matrix recover_x(const CovSequence& cov, const DualSolution& dual);

/// Null space of lambda I + T(Z) plus the least-squares gram recovery on the
/// inactive pairs.
LatentStructure recover_latent(const DualSolution& dual, const Matrix& x,
                               const RegParams& reg,
                               const SolverOptions& opts = {});

/// Rotate the latent structure into the eigenbasis of its gram and drop the
/// directions whose weight falls below weight_floor times the largest.  At
/// finite sample sizes the recovered null space often carries low-weight
/// directions whose contribution to the low-rank part is negligible; the kept
/// rows of g stay orthonormal and h becomes diagonal with descending weights.
LatentStructure reduce_latent(const LatentStructure& lat, double weight_floor);

/// Support of the block-row image of x + low_rank, thresholded at
/// support_tol times its largest absolute entry.
EdgeSet support_edges(const Matrix& x, const Matrix& low_rank, int m,
                      double support_tol = 1e-5);

/// True iff the gram recovery system over the complement of edges has full
/// column rank; certifies a transversal sparse/low-rank intersection.
bool transversality(const EdgeSet& edges, const Matrix& g, int m);

}  // namespace arlgm
