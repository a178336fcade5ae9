#include "arlgm/spectrum.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

#include "arlgm/errors.hpp"

namespace arlgm {

namespace {

CMatrix shift_block(const Matrix& w, int m, int n, double theta) {
  // w * Delta(theta)^* with Delta = [I, e^{i theta} I, ...].
  CMatrix out = CMatrix::Zero(w.rows(), m);
  for (int j = 0; j <= n; ++j) {
    std::complex<double> z = std::exp(std::complex<double>(0.0, -j * theta));
    out += z * w.middleCols(j * m, m).cast<std::complex<double>>();
  }
  return out;
}

}  // namespace

CMatrix JointSpectrum::inverse_at(double theta) const {
  CMatrix u = CMatrix::Zero(m + l, m + l);
  u.topLeftCorner(m, m) = sigma.eval(theta);
  if (l > 0) {
    CMatrix lm = shift_block(w, m, n, theta);
    u.bottomLeftCorner(l, m) = lm;
    u.topRightCorner(m, l) = lm.adjoint();
    u.bottomRightCorner(l, l).setIdentity();
  }
  return u;
}

CMatrix JointSpectrum::at(double theta) const {
  CMatrix u = inverse_at(theta);
  Eigen::LLT<CMatrix> llt(u);
  if (llt.info() != Eigen::Success)
    throw SolverError("joint inverse spectrum not PD at a grid point");
  return llt.solve(CMatrix::Identity(m + l, m + l));
}

std::vector<CMatrix> JointSpectrum::eval(const FreqGrid& grid) const {
  std::vector<CMatrix> out(grid.size());
  for (int k = 0; k < grid.size(); ++k) out[k] = at(grid.theta(k));
  return out;
}

std::vector<CMatrix> JointSpectrum::eval_manifest(const FreqGrid& grid) const {
  std::vector<CMatrix> out(grid.size());
  for (int k = 0; k < grid.size(); ++k)
    out[k] = at(grid.theta(k)).topLeftCorner(m, m);
  return out;
}

JointSpectrum assemble_joint(const FixedModel& model) {
  JointSpectrum joint;
  joint.m = model.m;
  joint.n = model.n;
  joint.sigma = model.sparse_poly();
  if (model.l == 0) {
    joint.l = 0;
    joint.w = Matrix::Zero(0, model.m * (model.n + 1));
    return joint;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(model.h);
  double cut = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int keep = 0;
  for (int i = 0; i < model.l; ++i)
    if (es.eigenvalues()[i] > cut) ++keep;
  joint.l = keep;
  joint.dropped = model.l - keep;
  joint.w = Matrix::Zero(keep, model.m * (model.n + 1));
  int row = 0;
  for (int i = 0; i < model.l; ++i) {
    if (es.eigenvalues()[i] <= cut) continue;
    joint.w.row(row++) = std::sqrt(es.eigenvalues()[i]) *
                         (es.eigenvectors().col(i).transpose() * model.g);
  }
  return joint;
}

std::vector<CMatrix> partial_coherence(const JointSpectrum& joint,
                                       const FreqGrid& grid) {
  std::vector<CMatrix> out(grid.size());
  const int d = joint.joint_dim();
  for (int k = 0; k < grid.size(); ++k) {
    CMatrix u = joint.inverse_at(grid.theta(k));
    Vector dg = u.diagonal().real();
    if (dg.minCoeff() <= 0.0)
      throw SolverError("partial coherence: nonpositive diagonal entry");
    Eigen::VectorXcd s =
        dg.cwiseSqrt().cwiseInverse().cast<std::complex<double>>();
    out[k] = s.asDiagonal() * u * s.asDiagonal();
    for (int i = 0; i < d; ++i) out[k](i, i) = 1.0;
  }
  return out;
}

Matrix coherence_mean_abs(const std::vector<CMatrix>& coherence) {
  if (coherence.empty()) return Matrix();
  Matrix acc = Matrix::Zero(coherence[0].rows(), coherence[0].cols());
  for (const CMatrix& c : coherence) acc += c.cwiseAbs();
  return acc / static_cast<double>(coherence.size());
}

namespace {

double sup_spectral_norm(const PseudoPoly& p, const FreqGrid& grid) {
  double s = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(p.eval(grid.theta(k)),
                                              Eigen::EigenvaluesOnly);
    s = std::max(s, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  return s;
}

std::vector<double> error_curve(const PseudoPoly& truth, const PseudoPoly& est,
                                const FreqGrid& grid, double denom) {
  std::vector<double> out(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    CMatrix d = truth.eval(grid.theta(k)) - est.eval(grid.theta(k));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(d, Eigen::EigenvaluesOnly);
    out[k] = es.eigenvalues().cwiseAbs().maxCoeff() / denom;
  }
  return out;
}

}  // namespace

ErrorCurves spectral_errors(const PseudoPoly& sigma_true,
                            const PseudoPoly& lambda_true,
                            const PseudoPoly& sigma_est,
                            const PseudoPoly& lambda_est,
                            const FreqGrid& grid) {
  if (sigma_true.dim() != sigma_est.dim() ||
      lambda_true.dim() != lambda_est.dim())
    throw ConfigError("spectral_errors: dimension mismatch");
  ErrorCurves curves;
  double ns = sup_spectral_norm(sigma_true, grid);
  if (ns > 0.0) {
    curves.sigma_defined = true;
    curves.e_sigma = error_curve(sigma_true, sigma_est, grid, ns);
  }
  double nl = sup_spectral_norm(lambda_true, grid);
  if (nl > 0.0) {
    curves.lambda_defined = true;
    curves.e_lambda = error_curve(lambda_true, lambda_est, grid, nl);
  }
  return curves;
}

}  // namespace arlgm
