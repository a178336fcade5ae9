#include "arlgm/maxent.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <utility>
#include <vector>

#include "arlgm/errors.hpp"
#include "arlgm/sl_dual.hpp"

namespace arlgm {

namespace {

struct Entry {
  int r, c;
  double v;
};

/// One basis direction of the constraint null space: a sparse symmetric
/// X part (directed entries, mirrors listed) and at most one H coordinate.
struct Dir {
  std::vector<Entry> xs;
  std::vector<Entry> xs00;  // entries with both indices inside the 00 block
  int hp = -1, hq = -1;
};

struct CertNums {
  double moment_gap = 0.0;
  double latent_margin = 0.0;
  double entropy = 0.0;
};

double log_det_llt(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// Lag mismatch / latent LMI margin / entropy of the spectrum (Delta x
/// Delta*)^{-1} against the given lags.
CertNums extension_numbers(const Matrix& x, const Matrix& g,
                           const EdgeSet& edges, const BlockRow& lags,
                           const FreqGrid& grid) {
  const int m = lags.dim();
  const int n = lags.order();
  PseudoPoly poly = shift_quadratic(x, m);
  std::vector<CMatrix> phi(grid.size());
  CertNums out;
  double logdet_sum = 0.0;
  const CMatrix id = CMatrix::Identity(m, m);
  for (int k = 0; k < grid.size(); ++k) {
    CMatrix s = poly.eval(grid.theta(k));
    Eigen::LLT<CMatrix> llt(s);
    if (llt.info() != Eigen::Success)
      throw SolverError("fitted manifest inverse spectrum not PD on grid");
    phi[k] = llt.solve(id);
    logdet_sum -= 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
  }
  out.entropy = logdet_sum / grid.size();
  for (int j = 0; j <= n; ++j) {
    Matrix rj = lag_mean(phi, grid, j);
    Matrix diff = rj - lags.block(j);
    for (int k = 0; k < m; ++k)
      for (int h = 0; h < m; ++h)
        if (k == h || edges.contains(k, h))
          out.moment_gap = std::max(out.moment_gap, std::abs(diff(k, h)));
  }
  if (g.rows() > 0) {
    Matrix tphi = toeplitz_integral(phi, grid, n);
    Matrix psi = g * (tphi - block_toeplitz(lags)) * g.transpose();
    out.latent_margin = min_eig(0.5 * (psi + psi.transpose()));
  }
  return out;
}

class FixedSolver {
 public:
  FixedSolver(const CovSequence& cov, const EdgeSet& edges, const Matrix& g,
              const MaxentOptions& opts)
      : edges_(edges), g_(g), opts_(opts), lags_(cov.lags) {
    m_ = cov.lags.dim();
    n_ = cov.lags.order();
    bigm_ = m_ * (n_ + 1);
    l_ = static_cast<int>(g.rows());
    if (edges.dim() != m_)
      throw ConfigError("solve_fixed: edge set dimension mismatch");
    if (l_ > 0 && static_cast<int>(g.cols()) != bigm_)
      throw ConfigError("solve_fixed: latent factor has wrong width");
    if (opts.grid_size < 2 * n_ + 2)
      throw ConfigError("solve_fixed: grid too coarse for the model order");
    if (l_ > 0 && !transversality(edges_, g_, m_))
      throw SolverError(
          "solve_fixed: latent gain not identifiable from the edge "
          "complement (transversality fails)");
    // Internal rescaling to unit average variance; exact in the solution.
    scale_ = static_cast<double>(m_) / lags_.block(0).trace();
    if (!(scale_ > 0.0) || !std::isfinite(scale_))
      throw DataError("solve_fixed: lag zero has nonpositive trace");
    lags_ *= scale_;
    t0_ = block_toeplitz(lags_);
    if (min_eig(t0_) <= 0.0)
      throw DataError("solve_fixed: covariance Toeplitz matrix not PD");
    build_basis();
  }

  FixedModel run(const CovSequence& cov) {
    initial_point();
    FreqGrid grid(opts_.grid_size);
    double mu = opts_.mu_init;
    int steps = 0;
    bool done = false;
    while (true) {
      center(mu, steps);
      bool last = mu <= opts_.mu_floor * (1.0 + 1e-12);
      if (mu <= 1e-6) {
        CertNums nums = extension_numbers(x_, g_, edges_, lags_, grid);
        double target = 0.3 * opts_.tol * scale_;
        if (nums.moment_gap <= target && nums.latent_margin >= -target) {
          done = true;
          break;
        }
      }
      if (last || steps >= opts_.max_newton) break;
      mu = std::max(mu / opts_.mu_factor, opts_.mu_floor);
    }
    if (!done && steps >= opts_.max_newton && mu > opts_.mu_floor)
      throw SolverError("solve_fixed: Newton budget exhausted");

    FixedModel model;
    model.m = m_;
    model.n = n_;
    model.l = l_;
    model.edges = edges_;
    model.g = g_;
    model.x = scale_ * x_;
    model.h = l_ > 0 ? Matrix(scale_ * h_) : Matrix(Matrix::Zero(0, 0));
    model.low_rank = l_ > 0 ? Matrix(g_.transpose() * model.h * g_)
                            : Matrix(Matrix::Zero(bigm_, bigm_));
    model.mu_final = mu;
    model.newton_steps = steps;
    Eigen::LLT<Matrix> llt00(Matrix(model.x.topLeftCorner(m_, m_)));
    if (llt00.info() != Eigen::Success)
      throw SolverError("solve_fixed: leading block lost definiteness");
    model.objective = -log_det_llt(llt00) +
                      block_toeplitz(cov.lags).cwiseProduct(model.x).sum();
    return model;
  }

 private:
  struct Chain {
    int j, k, h;
    int a0, b0;  // coordinate receiving the gain-dependent sum
  };

  void add_sym(Dir& d, int a, int b, double v) {
    d.xs.push_back({a, b, v});
    if (a != b) d.xs.push_back({b, a, v});
  }

  void finish(Dir&& d) {
    for (const Entry& e : d.xs)
      if (e.r < m_ && e.c < m_) d.xs00.push_back(e);
    dirs_.push_back(std::move(d));
  }

  bool constrained(int k, int h) const {
    return k != h && !edges_.contains(k, h);
  }

  void build_basis() {
    for (int a = 0; a < bigm_; ++a)
      for (int b = a; b < bigm_; ++b) {
        int k = a % m_, h = b % m_;
        if (constrained(k, h)) continue;
        Dir d;
        add_sym(d, a, b, 1.0);
        finish(std::move(d));
      }
    auto add_chain = [&](int j, int k, int h) {
      int len = n_ - j + 1;
      chains_.push_back({j, k, h, k, j * m_ + h});
      for (int s = 0; s + 1 < len; ++s) {
        Dir d;
        add_sym(d, s * m_ + k, (s + j) * m_ + h, 1.0);
        add_sym(d, (s + 1) * m_ + k, (s + 1 + j) * m_ + h, -1.0);
        finish(std::move(d));
      }
    };
    for (auto [k, h] : edges_.complement_pairs()) {
      add_chain(0, k, h);
      for (int j = 1; j <= n_; ++j) {
        add_chain(j, k, h);
        add_chain(j, h, k);
      }
    }
    first_h_dir_ = static_cast<int>(dirs_.size());
    for (int p = 0; p < l_; ++p)
      for (int q = p; q < l_; ++q) {
        Matrix b = g_.row(p).transpose() * g_.row(q);
        if (p != q)
          b += g_.row(q).transpose() * g_.row(p);
        Dir d;
        d.hp = p;
        d.hq = q;
        for (const Chain& ch : chains_) {
          double val = 0.0;
          for (int s = 0; s + ch.j <= n_; ++s)
            val += b(s * m_ + ch.k, (s + ch.j) * m_ + ch.h);
          if (val != 0.0) add_sym(d, ch.a0, ch.b0, -val);
        }
        finish(std::move(d));
      }
    nd_ = static_cast<int>(dirs_.size());
  }

  void initial_point() {
    h_ = Matrix::Identity(l_, l_);
    x_ = Matrix::Zero(bigm_, bigm_);
    if (l_ > 0) {
      Matrix gtg = g_.transpose() * g_;
      for (const Chain& ch : chains_) {
        double c = 0.0;
        for (int s = 0; s + ch.j <= n_; ++s)
          c += gtg(s * m_ + ch.k, (s + ch.j) * m_ + ch.h);
        x_(ch.a0, ch.b0) -= c;
        x_(ch.b0, ch.a0) = x_(ch.a0, ch.b0);
      }
    }
    x_ += (x_.norm() + 1.0) * Matrix::Identity(bigm_, bigm_);
  }

  bool factor(const Matrix& x, const Matrix& h, Eigen::LLT<Matrix>& lx,
              Eigen::LLT<Matrix>& l00, Eigen::LLT<Matrix>& lh) const {
    lx.compute(x);
    if (lx.info() != Eigen::Success) return false;
    l00.compute(Matrix(x.topLeftCorner(m_, m_)));
    if (l00.info() != Eigen::Success) return false;
    if (l_ > 0) {
      lh.compute(h);
      if (lh.info() != Eigen::Success) return false;
    }
    return true;
  }

  double phi(const Matrix& x, const Eigen::LLT<Matrix>& lx,
             const Eigen::LLT<Matrix>& l00, const Eigen::LLT<Matrix>& lh,
             double mu) const {
    double val = -log_det_llt(l00) + t0_.cwiseProduct(x).sum();
    val -= mu * log_det_llt(lx);
    if (l_ > 0) val -= mu * log_det_llt(lh);
    return val;
  }

  void center(double mu, int& steps) {
    Eigen::LLT<Matrix> lx, l00, lh;
    if (!factor(x_, h_, lx, l00, lh))
      throw SolverError("solve_fixed: infeasible iterate");
    double val = phi(x_, lx, l00, lh, mu);
    const double ctol = std::max(1e-13, 1e-3 * mu);
    const Matrix id = Matrix::Identity(bigm_, bigm_);
    for (int it = 0; it < 80 && steps < opts_.max_newton; ++it) {
      Matrix xinv = lx.solve(id);
      Matrix x00inv = l00.solve(Matrix::Identity(m_, m_));
      Matrix hinv =
          l_ > 0 ? Matrix(lh.solve(Matrix::Identity(l_, l_))) : Matrix();
      Matrix gx = t0_ - mu * xinv;
      gx.topLeftCorner(m_, m_) -= x00inv;

      Vector grad(nd_);
      for (int a = 0; a < nd_; ++a) {
        double s = 0.0;
        for (const Entry& e : dirs_[a].xs) s += e.v * gx(e.r, e.c);
        if (dirs_[a].hp >= 0) {
          int p = dirs_[a].hp, q = dirs_[a].hq;
          s += (p == q ? -mu * hinv(p, p) : -2.0 * mu * hinv(p, q));
        }
        grad[a] = s;
      }

      Matrix hess = Matrix::Zero(nd_, nd_);
      // Small-small pairs directly; rows of gain directions through the
      // precomputed middle products.
      for (int a = 0; a < first_h_dir_; ++a)
        for (int b = a; b < first_h_dir_; ++b) {
          double hxx = 0.0, h00 = 0.0;
          for (const Entry& ea : dirs_[a].xs)
            for (const Entry& eb : dirs_[b].xs)
              hxx += ea.v * eb.v * xinv(ea.c, eb.r) * xinv(eb.c, ea.r);
          for (const Entry& ea : dirs_[a].xs00)
            for (const Entry& eb : dirs_[b].xs00)
              h00 += ea.v * eb.v * x00inv(ea.c, eb.r) * x00inv(eb.c, ea.r);
          hess(a, b) = mu * hxx + h00;
        }
      for (int a = first_h_dir_; a < nd_; ++a) {
        Matrix ma = Matrix::Zero(bigm_, bigm_);
        for (const Entry& e : dirs_[a].xs)
          ma.noalias() += e.v * xinv.col(e.r) * xinv.row(e.c);
        Matrix m00 = Matrix::Zero(m_, m_);
        for (const Entry& e : dirs_[a].xs00)
          m00.noalias() += e.v * x00inv.col(e.r) * x00inv.row(e.c);
        Matrix bp = Matrix::Zero(l_, l_);
        bp(dirs_[a].hp, dirs_[a].hq) = 1.0;
        bp(dirs_[a].hq, dirs_[a].hp) = 1.0;
        Matrix mh = hinv * bp * hinv;
        for (int b = 0; b <= a; ++b) {
          double s = 0.0;
          for (const Entry& e : dirs_[b].xs) s += mu * e.v * ma(e.r, e.c);
          for (const Entry& e : dirs_[b].xs00) s += e.v * m00(e.r, e.c);
          if (dirs_[b].hp >= 0) {
            int p = dirs_[b].hp, q = dirs_[b].hq;
            s += (p == q ? mu * mh(p, p) : 2.0 * mu * mh(p, q));
          }
          hess(b, a) = s;
        }
      }

      Eigen::LDLT<Matrix> ldlt(hess.selfadjointView<Eigen::Upper>());
      Vector d = ldlt.solve(-grad);
      double dec2 = -grad.dot(d);
      if (opts_.trace)
        std::cerr << "maxent mu=" << mu << " step=" << steps
                  << " dec2=" << dec2 << " phi=" << val << "\n";
      if (!(dec2 > ctol)) return;

      Matrix dx = Matrix::Zero(bigm_, bigm_);
      Matrix dh = Matrix::Zero(l_, l_);
      for (int a = 0; a < nd_; ++a) {
        if (d[a] == 0.0) continue;
        for (const Entry& e : dirs_[a].xs) dx(e.r, e.c) += d[a] * e.v;
        if (dirs_[a].hp >= 0) {
          dh(dirs_[a].hp, dirs_[a].hq) += d[a];
          if (dirs_[a].hp != dirs_[a].hq) dh(dirs_[a].hq, dirs_[a].hp) += d[a];
        }
      }

      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        Matrix xn = x_ + alpha * dx;
        Matrix hn = h_ + alpha * dh;
        Eigen::LLT<Matrix> lxn, l00n, lhn;
        if (factor(xn, hn, lxn, l00n, lhn)) {
          double valn = phi(xn, lxn, l00n, lhn, mu);
          if (valn <= val - 1e-4 * alpha * dec2) {
            x_ = std::move(xn);
            h_ = std::move(hn);
            lx = std::move(lxn);
            l00 = std::move(l00n);
            lh = std::move(lhn);
            val = valn;
            moved = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++steps;
      if (!moved) return;
    }
  }

  EdgeSet edges_;
  Matrix g_;
  MaxentOptions opts_;
  BlockRow lags_;  // rescaled
  int m_, n_, bigm_, l_, nd_ = 0, first_h_dir_ = 0;
  double scale_ = 1.0;
  Matrix t0_;
  std::vector<Dir> dirs_;
  std::vector<Chain> chains_;
  Matrix x_, h_;
};

}  // namespace

FixedModel solve_fixed(const CovSequence& cov, const EdgeSet& edges,
                       const Matrix& g, const MaxentOptions& opts) {
  return FixedSolver(cov, edges, g, opts).run(cov);
}

ExtensionCertificate certify_extension(const FixedModel& model,
                                       const CovSequence& cov,
                                       const FreqGrid& grid, double tol) {
  CertNums nums =
      extension_numbers(model.x, model.g, model.edges, cov.lags, grid);
  ExtensionCertificate cert;
  cert.moment_gap = nums.moment_gap;
  cert.latent_margin = nums.latent_margin;
  cert.entropy = nums.entropy;
  cert.ok = cert.moment_gap <= tol && cert.latent_margin >= -tol;
  return cert;
}

}  // namespace arlgm
