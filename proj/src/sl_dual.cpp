#include "arlgm/sl_dual.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "arlgm/errors.hpp"

namespace arlgm {

namespace {

double log_det_llt(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// tr(P Sa Q Sb) for symmetric-basis elements Sa = E_rc (+ E_cr if r != c).
double basis_pair_trace(const Matrix& p, const Matrix& q, int r, int c,
                        int r2, int c2) {
  auto term = [&](int a, int b, int a2, int b2) {
    return p(b2, a) * q(b, a2);
  };
  double s = term(r, c, r2, c2);
  if (r2 != c2) s += term(r, c, c2, r2);
  if (r != c) {
    s += term(c, r, r2, c2);
    if (r2 != c2) s += term(c, r, c2, r2);
  }
  return s;
}

/// tr(Sa P) for a symmetric P.
double basis_trace(const Matrix& p, int r, int c) {
  return r == c ? p(r, r) : 2.0 * p(r, c);
}

struct ZVar {
  int j, k, h;
  double c;  // coefficient in the group sum (2 for j = 0, else 1)
  int pair;
};

/// Least-squares system mapping the latent gram H (svech, p <= q) to the
/// block-row entries of shift-adjoint(G' H G) on the given pairs; row order
/// per pair: j = 0 once, then (k,h) and (h,k) for j = 1..n.
Matrix latent_system(const Matrix& g, int m,
                     const std::vector<std::pair<int, int>>& pairs) {
  const int l = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols()) / m - 1;
  const int cols = l * (l + 1) / 2;
  const int rows = static_cast<int>(pairs.size()) * (2 * n + 1);
  Matrix a = Matrix::Zero(rows, cols);
  int col = 0;
  for (int p = 0; p < l; ++p)
    for (int q = p; q < l; ++q, ++col) {
      Matrix basis;
      if (p == q)
        basis = g.row(p).transpose() * g.row(p);
      else
        basis = g.row(p).transpose() * g.row(q) +
                g.row(q).transpose() * g.row(p);
      BlockRow d = toeplitz_adjoint(basis, m);
      int row = 0;
      for (auto [k, h] : pairs) {
        a(row++, col) = d.block(0)(k, h);
        for (int j = 1; j <= n; ++j) {
          a(row++, col) = d.block(j)(k, h);
          a(row++, col) = d.block(j)(h, k);
        }
      }
    }
  return a;
}

std::vector<std::pair<int, int>> inactive_pairs(const BlockRow& z,
                                                double lambda_gamma,
                                                double margin) {
  std::vector<std::pair<int, int>> out;
  const int m = z.dim();
  for (int k = 0; k < m; ++k)
    for (int h = k + 1; h < m; ++h) {
      double s = 0.0;
      for (int j = 0; j <= z.order(); ++j)
        s += std::abs(z.block(j)(k, h)) + std::abs(z.block(j)(h, k));
      if (s < lambda_gamma - margin) out.emplace_back(k, h);
    }
  return out;
}

class SlDualSolver {
 public:
  SlDualSolver(const CovSequence& cov, const RegParams& reg,
               const SolverOptions& opts)
      : cov_(cov), reg_(reg), opts_(opts) {
    m_ = cov.lags.dim();
    n_ = cov.lags.order();
    bigm_ = m_ * (n_ + 1);
    lambda_ = reg.lambda;
    lg_ = reg.lambda_gamma();
    if (!(lambda_ > 0.0) || !(reg.gamma > 0.0))
      throw ConfigError("solve_sl_dual: lambda and gamma must be positive");
    t0_ = block_toeplitz(cov.lags);
    if (min_eig(t0_) <= 0.0)
      throw DataError("solve_sl_dual: covariance Toeplitz matrix not PD");

    for (int r = 0; r < m_; ++r)
      for (int c = r; c < m_; ++c) wb_.emplace_back(r, c);
    qw_ = static_cast<int>(wb_.size());

    npairs_ = 0;
    std::vector<std::vector<int>> pidx(m_, std::vector<int>(m_, -1));
    for (int k = 0; k < m_; ++k)
      for (int h = k + 1; h < m_; ++h) pidx[k][h] = npairs_++;
    pvars_.resize(npairs_);
    for (int k = 0; k < m_; ++k)
      for (int h = k + 1; h < m_; ++h)
        zv_.push_back({0, k, h, 2.0, pidx[k][h]});
    for (int j = 1; j <= n_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int h = 0; h < m_; ++h)
          if (k != h)
            zv_.push_back({j, k, h, 1.0, pidx[std::min(k, h)][std::max(k, h)]});
    qz_ = static_cast<int>(zv_.size());
    nv_ = qw_ + 2 * qz_;
    tpos_.resize(qz_);
    for (int i = 0; i < qz_; ++i) {
      const ZVar& zv = zv_[i];
      pvars_[zv.pair].push_back(i);
      for (int s = 0; s + zv.j <= n_; ++s) {
        int r = s * m_ + zv.k, c = (s + zv.j) * m_ + zv.h;
        tpos_[i].emplace_back(r, c);
        tpos_[i].emplace_back(c, r);
      }
    }

    if (opts.trace) {
      if (opts.trace_path.empty()) {
        trace_ = &std::cerr;
      } else {
        trace_file_.open(opts.trace_path, std::ios::app);
        trace_ = &trace_file_;
      }
    }
  }

  DualSolution run() {
    Vector x = initial_point();
    double mu = opts_.mu_init;
    int steps = 0;
    while (true) {
      center(x, mu, steps);
      if (mu <= opts_.mu_min * (1.0 + 1e-12) || steps >= opts_.max_newton) {
        DualSolution sol = pack(x, mu, steps);
        try {
          attach_certificate(sol);
        } catch (const std::exception&) {
          sol.cert.certified = false;
        }
        if (sol.cert.certified || mu <= opts_.mu_floor * (1.0 + 1e-12) ||
            steps >= opts_.max_newton)
          return sol;
      }
      mu = std::max(mu / opts_.mu_factor, opts_.mu_floor);
    }
  }

 private:
  struct Eval {
    Matrix w, u, v;
    Vector slack;
    Eigen::LLT<Matrix> lw, lu, lv;
    bool feasible = false;
  };

  Vector initial_point() const {
    Vector x = Vector::Zero(nv_);
    double alpha = 0.5 * min_eig(t0_);
    for (int a = 0; a < qw_; ++a)
      if (wb_[a].first == wb_[a].second) x[a] = alpha;
    double eps = lg_ / (16.0 * (n_ + 1));
    for (int i = 0; i < qz_; ++i) {
      x[qw_ + i] = eps;
      x[qw_ + qz_ + i] = eps;
    }
    return x;
  }

  Matrix build_w(const Vector& x) const {
    Matrix w = Matrix::Zero(m_, m_);
    for (int a = 0; a < qw_; ++a) {
      auto [r, c] = wb_[a];
      w(r, c) = x[a];
      w(c, r) = x[a];
    }
    return w;
  }

  BlockRow build_z(const Vector& x) const {
    BlockRow z(m_, n_);
    for (int i = 0; i < qz_; ++i) {
      double val = x[qw_ + i] - x[qw_ + qz_ + i];
      const ZVar& zv = zv_[i];
      z.block(zv.j)(zv.k, zv.h) = val;
      if (zv.j == 0) z.block(0)(zv.h, zv.k) = val;
    }
    return z;
  }

  Eval evaluate(const Vector& x) const {
    Eval e;
    for (int i = 0; i < 2 * qz_; ++i)
      if (x[qw_ + i] <= 0.0) return e;
    e.slack = Vector::Constant(npairs_, lg_);
    for (int i = 0; i < qz_; ++i)
      e.slack[zv_[i].pair] -= zv_[i].c * (x[qw_ + i] + x[qw_ + qz_ + i]);
    if (npairs_ > 0 && e.slack.minCoeff() <= 0.0) return e;
    e.w = build_w(x);
    e.lw.compute(e.w);
    if (e.lw.info() != Eigen::Success) return e;
    Matrix tz = block_toeplitz(build_z(x));
    e.u = t0_ + tz;
    e.u.topLeftCorner(m_, m_) -= e.w;
    e.lu.compute(e.u);
    if (e.lu.info() != Eigen::Success) return e;
    e.v = tz;
    e.v.diagonal().array() += lambda_;
    e.lv.compute(e.v);
    if (e.lv.info() != Eigen::Success) return e;
    e.feasible = true;
    return e;
  }

  double barrier(const Eval& e, const Vector& x, double mu) const {
    double phi = -log_det_llt(e.lw);
    phi -= mu * (log_det_llt(e.lu) + log_det_llt(e.lv));
    for (int p = 0; p < npairs_; ++p) phi -= mu * std::log(e.slack[p]);
    for (int i = 0; i < 2 * qz_; ++i) phi -= mu * std::log(x[qw_ + i]);
    return phi;
  }

  void gradient_hessian(const Eval& e, const Vector& x, double mu, Vector& g,
                        Matrix& hess) const {
    const Matrix id = Matrix::Identity(bigm_, bigm_);
    Matrix winv = e.lw.solve(Matrix::Identity(m_, m_));
    Matrix uinv = e.lu.solve(id);
    Matrix vinv = e.lv.solve(id);
    const Matrix kk = uinv.topLeftCorner(m_, m_);

    g.setZero(nv_);
    hess.setZero(nv_, nv_);

    for (int a = 0; a < qw_; ++a) {
      auto [r, c] = wb_[a];
      g[a] = -basis_trace(winv, r, c) + mu * basis_trace(kk, r, c);
      for (int b = a; b < qw_; ++b) {
        auto [r2, c2] = wb_[b];
        hess(a, b) = basis_pair_trace(winv, winv, r, c, r2, c2) +
                     mu * basis_pair_trace(kk, kk, r, c, r2, c2);
      }
    }

    // Per-variable contractions with the two LMI inverses.
    Vector gu(qz_), gv(qz_);
    std::vector<Matrix> pmats(qz_);
    for (int i = 0; i < qz_; ++i) {
      double su = 0.0, sv = 0.0;
      Matrix pi = Matrix::Zero(m_, m_);
      for (auto [r, c] : tpos_[i]) {
        su += uinv(r, c);
        sv += vinv(r, c);
        pi.noalias() +=
            uinv.col(r).head(m_) * uinv.col(c).head(m_).transpose();
      }
      gu[i] = su;
      gv[i] = sv;
      pmats[i] = std::move(pi);
    }

    for (int a = 0; a < qw_; ++a) {
      auto [r, c] = wb_[a];
      for (int i = 0; i < qz_; ++i) {
        double t = mu * basis_trace(pmats[i], r, c);
        hess(a, qw_ + i) = -t;
        hess(a, qw_ + qz_ + i) = t;
      }
    }

    for (int i = 0; i < qz_; ++i) {
      double sp = e.slack[zv_[i].pair];
      double common = mu * zv_[i].c / sp;
      g[qw_ + i] = -mu * (gu[i] + gv[i]) + common - mu / x[qw_ + i];
      g[qw_ + qz_ + i] =
          mu * (gu[i] + gv[i]) + common - mu / x[qw_ + qz_ + i];
    }

    for (int i = 0; i < qz_; ++i) {
      for (int i2 = i; i2 < qz_; ++i2) {
        double tu = 0.0, tv = 0.0;
        for (auto [r, c] : tpos_[i])
          for (auto [r2, c2] : tpos_[i2]) {
            tu += uinv(c, r2) * uinv(c2, r);
            tv += vinv(c, r2) * vinv(c2, r);
          }
        double t = mu * (tu + tv);
        hess(qw_ + i, qw_ + i2) += t;
        hess(qw_ + qz_ + i, qw_ + qz_ + i2) += t;
        hess(qw_ + i, qw_ + qz_ + i2) -= t;
        if (i2 != i) hess(qw_ + i2, qw_ + qz_ + i) -= t;
      }
      hess(qw_ + i, qw_ + i) += mu / (x[qw_ + i] * x[qw_ + i]);
      hess(qw_ + qz_ + i, qw_ + qz_ + i) +=
          mu / (x[qw_ + qz_ + i] * x[qw_ + qz_ + i]);
    }

    for (int p = 0; p < npairs_; ++p) {
      double s2 = e.slack[p] * e.slack[p];
      for (int i : pvars_[p])
        for (int i2 : pvars_[p]) {
          double t = mu * zv_[i].c * zv_[i2].c / s2;
          if (qw_ + i <= qw_ + i2) hess(qw_ + i, qw_ + i2) += t;
          hess(qw_ + i, qw_ + qz_ + i2) += t;
          if (i2 >= i) hess(qw_ + qz_ + i, qw_ + qz_ + i2) += t;
        }
    }

    hess = hess.selfadjointView<Eigen::Upper>();
  }

  void center(Vector& x, double mu, int& steps) {
    Eval e = evaluate(x);
    if (!e.feasible)
      throw SolverError("solve_sl_dual: infeasible iterate");
    double phi = barrier(e, x, mu);
    Vector g;
    Matrix hess;
    const double ctol = std::max(1e-14, 1e-3 * mu);
    for (int it = 0; it < 60 && steps < opts_.max_newton; ++it) {
      gradient_hessian(e, x, mu, g, hess);
      Eigen::LDLT<Matrix> ldlt(hess);
      Vector d = ldlt.solve(-g);
      double dec2 = -g.dot(d);
      if (trace_)
        (*trace_) << "sl_dual mu=" << mu << " step=" << steps
                  << " dec2=" << dec2 << " phi=" << phi << "\n";
      if (!(dec2 > ctol)) return;
      // Ratio test on the linear constraints, then backtracking.
      double alpha = 1.0;
      for (int i = 0; i < 2 * qz_; ++i)
        if (d[qw_ + i] < 0.0)
          alpha = std::min(alpha, -0.98 * x[qw_ + i] / d[qw_ + i]);
      Vector dslack = Vector::Zero(npairs_);
      for (int i = 0; i < qz_; ++i)
        dslack[zv_[i].pair] -= zv_[i].c * (d[qw_ + i] + d[qw_ + qz_ + i]);
      for (int p = 0; p < npairs_; ++p)
        if (dslack[p] < 0.0)
          alpha = std::min(alpha, -0.98 * e.slack[p] / dslack[p]);
      bool moved = false;
      for (int bt = 0; bt < 50; ++bt) {
        Vector xn = x + alpha * d;
        Eval en = evaluate(xn);
        if (en.feasible) {
          double phin = barrier(en, xn, mu);
          if (phin <= phi - 1e-4 * alpha * dec2) {
            x = std::move(xn);
            e = std::move(en);
            phi = phin;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++steps;
      if (!moved) return;  // stalled; certification decides what happens
    }
  }

  DualSolution pack(const Vector& x, double mu, int steps) const {
    DualSolution sol{build_w(x), build_z(x), 0.0, mu, steps, {}};
    Eigen::LLT<Matrix> lw(sol.w);
    sol.objective = log_det_llt(lw) + m_;
    return sol;
  }

  void attach_certificate(DualSolution& sol) const {
    Matrix x = recover_x(cov_, sol);
    LatentStructure lat = recover_latent(sol, x, reg_, opts_);
    DualCertificate c;
    Matrix tz = block_toeplitz(sol.z);
    Matrix u = t0_ + tz;
    u.topLeftCorner(m_, m_) -= sol.w;
    Matrix v = tz;
    v.diagonal().array() += lambda_;
    c.comp_slack_x = u.cwiseProduct(x).sum();
    c.comp_slack_l = v.cwiseProduct(lat.low_rank).sum();
    c.min_eig_u = min_eig(u);
    c.min_eig_v = min_eig(v);
    c.group_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m_; ++k)
      for (int h = k + 1; h < m_; ++h) {
        double s = 0.0;
        for (int j = 0; j <= n_; ++j)
          s += std::abs(sol.z.block(j)(k, h)) + std::abs(sol.z.block(j)(h, k));
        c.group_margin = std::min(c.group_margin, lg_ - s);
      }
    Eigen::LLT<Matrix> lx(Matrix(x.topLeftCorner(m_, m_)));
    if (lx.info() != Eigen::Success)
      throw SolverError("certificate: recovered X00 not PD");
    double primal = -log_det_llt(lx) + t0_.cwiseProduct(x).sum() +
                    lg_ * h_inf_norm(toeplitz_adjoint(x + lat.low_rank, m_)) +
                    lambda_ * lat.low_rank.trace();
    c.primal_objective = primal;
    c.dual_objective = sol.objective;
    c.gap = primal - sol.objective;
    double scale = opts_.tol * (1.0 + std::abs(sol.objective));
    c.certified = c.gap <= scale && std::abs(c.comp_slack_x) <= opts_.tol &&
                  std::abs(c.comp_slack_l) <= opts_.tol &&
                  c.min_eig_u >= -opts_.tol && c.min_eig_v >= -opts_.tol &&
                  c.group_margin >= -opts_.tol;
    sol.cert = c;
  }

  const CovSequence& cov_;
  RegParams reg_;
  SolverOptions opts_;
  int m_, n_, bigm_, qw_, qz_, nv_, npairs_;
  double lambda_, lg_;
  Matrix t0_;
  std::vector<std::pair<int, int>> wb_;
  std::vector<ZVar> zv_;
  std::vector<std::vector<std::pair<int, int>>> tpos_;
  std::vector<std::vector<int>> pvars_;
  std::ostream* trace_ = nullptr;
  std::ofstream trace_file_;
};

}  // namespace

double h_inf_norm(const BlockRow& y) {
  double s = 0.0;
  for (int k = 0; k < y.dim(); ++k)
    for (int h = k + 1; h < y.dim(); ++h) {
      double v = 0.0;
      for (int j = 0; j <= y.order(); ++j)
        v = std::max({v, std::abs(y.block(j)(k, h)),
                      std::abs(y.block(j)(h, k))});
      s += v;
    }
  return s;
}

double low_rank_penalty(const Matrix& low_rank, int m, const FreqGrid& grid) {
  PseudoPoly p = shift_quadratic(low_rank, m);
  double s = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    Eigen::JacobiSVD<CMatrix> svd(p.eval(grid.theta(k)));
    s += svd.singularValues().sum();
  }
  return s / grid.size();
}

DualSolution solve_sl_dual(const CovSequence& cov, const RegParams& reg,
                           const SolverOptions& opts) {
  return SlDualSolver(cov, reg, opts).run();
}

Matrix recover_x(const CovSequence& cov, const DualSolution& dual) {
  const int m = cov.lags.dim();
  Matrix mm = block_toeplitz(cov.lags) + block_toeplitz(dual.z);
  Eigen::LLT<Matrix> llt(mm);
  if (llt.info() != Eigen::Success)
    throw SolverError("recover_x: Yule-Walker matrix not PD");
  Matrix e0 = Matrix::Zero(mm.rows(), m);
  e0.topRows(m).setIdentity();
  Matrix y = llt.solve(e0);
  Eigen::LLT<Matrix> ly(Matrix(0.5 * (y.topRows(m) + y.topRows(m).transpose())));
  if (ly.info() != Eigen::Success)
    throw SolverError("recover_x: leading block not PD");
  Matrix x = y * ly.solve(y.transpose());
  return 0.5 * (x + x.transpose());
}

LatentStructure recover_latent(const DualSolution& dual, const Matrix& x,
                               const RegParams& reg,
                               const SolverOptions& opts) {
  const int m = dual.z.dim();
  const int n = dual.z.order();
  const int bigm = m * (n + 1);
  Matrix v = block_toeplitz(dual.z);
  v.diagonal().array() += reg.lambda;
  Eigen::SelfAdjointEigenSolver<Matrix> es(v);
  const double cut = opts.rank_tol * reg.lambda;
  int l = 0;
  while (l < bigm && es.eigenvalues()[l] <= cut) ++l;

  LatentStructure lat;
  lat.l = l;
  lat.g = es.eigenvectors().leftCols(l).transpose();
  lat.inactive = inactive_pairs(dual.z, reg.lambda_gamma(), opts.rank_tol);
  if (l == 0) {
    lat.h = Matrix::Zero(0, 0);
    lat.low_rank = Matrix::Zero(bigm, bigm);
    lat.unique = true;
    return lat;
  }

  Matrix a = latent_system(lat.g, m, lat.inactive);
  BlockRow dx = toeplitz_adjoint(x, m);
  Vector b(a.rows());
  {
    int row = 0;
    for (auto [k, h] : lat.inactive) {
      b[row++] = -dx.block(0)(k, h);
      for (int j = 1; j <= n; ++j) {
        b[row++] = -dx.block(j)(k, h);
        b[row++] = -dx.block(j)(h, k);
      }
    }
  }
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int cols = static_cast<int>(a.cols());
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-8 * std::max(smax, 1e-300)) ++rank;
  lat.unique = (rank == cols);
  svd.setThreshold(1e-8);
  Vector hv = svd.solve(b);

  Matrix h = Matrix::Zero(l, l);
  int idx = 0;
  for (int p = 0; p < l; ++p)
    for (int q = p; q < l; ++q, ++idx) {
      h(p, q) = hv[idx];
      h(q, p) = hv[idx];
    }
  Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
  double hscale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (eh.eigenvalues().minCoeff() < -1e-8 * hscale)
    throw SolverError(
        "recover_latent: latent gram has a significant negative eigenvalue");
  Vector clipped = eh.eigenvalues().cwiseMax(0.0);
  lat.h = eh.eigenvectors() * clipped.asDiagonal() *
          eh.eigenvectors().transpose();
  lat.low_rank = lat.g.transpose() * lat.h * lat.g;
  return lat;
}

LatentStructure reduce_latent(const LatentStructure& lat, double weight_floor) {
  if (lat.l == 0 || !(weight_floor > 0.0)) return lat;
  Eigen::SelfAdjointEigenSolver<Matrix> eh(lat.h);
  double wmax = eh.eigenvalues().maxCoeff();
  double cut = weight_floor * std::max(wmax, 0.0);
  std::vector<int> keep;
  for (int i = static_cast<int>(eh.eigenvalues().size()) - 1; i >= 0; --i)
    if (eh.eigenvalues()[i] >= cut && eh.eigenvalues()[i] > 0.0)
      keep.push_back(i);
  LatentStructure out;
  out.l = static_cast<int>(keep.size());
  out.g = Matrix::Zero(out.l, lat.g.cols());
  out.h = Matrix::Zero(out.l, out.l);
  // Rows of eigvecs' * g stay orthonormal because the rotation is orthogonal.
  for (int r = 0; r < out.l; ++r) {
    out.g.row(r) = eh.eigenvectors().col(keep[r]).transpose() * lat.g;
    out.h(r, r) = eh.eigenvalues()[keep[r]];
  }
  out.low_rank = out.g.transpose() * out.h * out.g;
  out.unique = lat.unique;
  out.inactive = lat.inactive;
  return out;
}

EdgeSet support_edges(const Matrix& x, const Matrix& low_rank, int m,
                      double support_tol) {
  BlockRow d = toeplitz_adjoint(x + low_rank, m);
  double cut = support_tol * d.max_abs();
  EdgeSet e(m);
  for (int k = 0; k < m; ++k)
    for (int h = k + 1; h < m; ++h) {
      double v = 0.0;
      for (int j = 0; j <= d.order(); ++j)
        v = std::max({v, std::abs(d.block(j)(k, h)),
                      std::abs(d.block(j)(h, k))});
      if (v > cut) e.insert(k, h);
    }
  return e;
}

bool transversality(const EdgeSet& edges, const Matrix& g, int m) {
  const int l = static_cast<int>(g.rows());
  if (l == 0) return true;
  Matrix a = latent_system(g, m, edges.complement_pairs());
  if (a.rows() < a.cols()) return false;
  Eigen::BDCSVD<Matrix> svd(a);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-8 * std::max(smax, 1e-300)) ++rank;
  return rank == static_cast<int>(a.cols());
}

}  // namespace arlgm
