#include "phaseless/lowrank.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace phaseless {

std::size_t SvdResult::rank(double relative_tol) const {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = relative_tol * sigma(0);
  return static_cast<std::size_t>((sigma.array() > cut).count());
}

CMatrix SvdResult::reconstruct() const { return u * sigma.asDiagonal() * v.adjoint(); }

SvdResult svd(const CMatrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("svd: non-finite input");
  Eigen::BDCSVD<CMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

SvdResult hermitian_svd(const CMatrix& a) {
  if (!a.allFinite()) throw std::invalid_argument("hermitian_svd: non-finite input");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  const RVector& lambda = eig.eigenvalues();
  const auto n = lambda.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    return std::abs(lambda(x)) > std::abs(lambda(y));
  });
  SvdResult out{CMatrix(n, n), RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.sigma(k) = std::abs(lambda(src));
    out.v.col(k) = eig.eigenvectors().col(src);
    out.u.col(k) = lambda(src) < 0.0 ? CVector(-eig.eigenvectors().col(src)) : CVector(eig.eigenvectors().col(src));
  }
  return out;
}

double nuclear_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::BDCSVD<CMatrix>(a).singularValues().sum();
}

CMatrix soft_threshold(const CMatrix& a, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("soft_threshold: negative threshold");
  if (a.size() == 0) return a;
  const SvdResult d = svd(a);
  const RVector shrunk = (d.sigma.array() - tau).max(0.0).matrix();
  return d.u * shrunk.asDiagonal() * d.v.adjoint();
}

CMatrix rank_one_project(const CMatrix& a) {
  if (a.size() == 0) return a;
  const SvdResult d = svd(a);
  return d.sigma(0) * d.u.col(0) * d.v.col(0).adjoint();
}

CMatrix soft_threshold_hermitian(const CMatrix& a, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("soft_threshold_hermitian: negative threshold");
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  const RVector& lambda = eig.eigenvalues();
  RVector shrunk(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    const double mag = std::max(std::abs(lambda(k)) - tau, 0.0);
    shrunk(k) = lambda(k) < 0.0 ? -mag : mag;
  }
  const auto& v = eig.eigenvectors();
  return v * shrunk.asDiagonal() * v.adjoint();
}

CMatrix rank_one_project_hermitian(const CMatrix& a) {
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  const RVector& lambda = eig.eigenvalues();
  Eigen::Index top = 0;
  lambda.cwiseAbs().maxCoeff(&top);
  const CVector v = eig.eigenvectors().col(top);
  return lambda(top) * v * v.adjoint();
}

CompletionResult complete_matrix(const TimeReversalMatrix& m, const CompletionParams& params) {
  const auto n = m.values.rows();
  const auto known = static_cast<double>(m.known_count());
  if (known == 0.0) throw std::invalid_argument("complete_matrix: no known entries");
  if (m.fully_known()) return {m.values, 0, 0.0, true};

  const CMatrix zero = CMatrix::Zero(n, n);
  const CMatrix observed = m.known.select(m.values, zero);
  const double observed_norm = observed.norm();
  if (observed_norm == 0.0) return {zero, 0, 0.0, true};

  const double mean_mag = observed.cwiseAbs().sum() / known;
  const double nn = static_cast<double>(n);
  const double tau = params.threshold > 0.0 ? params.threshold : 5.0 * nn * mean_mag;
  const double delta = params.step > 0.0 ? params.step : 1.2 * nn * nn / known;

  // Warm start: kick the dual variable so the first iterate is nonzero.
  const double spectral = Eigen::BDCSVD<CMatrix>(observed).singularValues()(0);
  const double k0 = std::ceil(tau / (delta * spectral));
  CMatrix dual = k0 * delta * observed;

  CompletionResult result;
  result.matrix = zero;
  result.relative_residual = 1.0;
  double best = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  std::size_t growth = 0;

  for (std::size_t it = 1; it <= params.max_iters; ++it) {
    const CMatrix herm = 0.5 * (dual + dual.adjoint());
    CMatrix x = soft_threshold_hermitian(herm, tau);
    x = 0.5 * (x + x.adjoint());
    const CMatrix residual = m.known.select(m.values - x, zero);
    const double rel = residual.norm() / observed_norm;
    if (!std::isfinite(rel)) throw SolverError("complete_matrix", "non-finite iterate");

    if (rel < best) {
      best = rel;
      result.matrix = x;
      result.relative_residual = rel;
      result.iterations = it;
    }
    if (rel <= params.tolerance) {
      result.converged = true;
      break;
    }
    growth = rel > previous ? growth + 1 : 0;
    if (growth >= params.patience)
      throw SolverError("complete_matrix", "residual grew for " + std::to_string(growth) + " iterations");
    previous = rel;
    dual += delta * residual;
  }
  return result;
}

}  // namespace phaseless
