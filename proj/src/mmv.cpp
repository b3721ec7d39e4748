#include "phaseless/mmv.hpp"

#include "phaseless/lowrank.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace phaseless {

CVector incident_field(const CMatrix& sensing, const CVector& f) {
  if (sensing.rows() != f.size())
    throw std::invalid_argument("incident_field: illumination length does not match the sensing matrix");
  return sensing.transpose() * f;
}

CMatrix build_forward_operator(const CMatrix& sensing, const CVector& f) {
  return sensing * incident_field(sensing, f).asDiagonal();
}

SingularVectorData singular_vector_data(const TimeReversalMatrix& m, std::size_t count) {
  if (count == 0) throw std::invalid_argument("singular_vector_data: need at least one vector");
  const CMatrix sub = m.active_submatrix();
  const SvdResult d = hermitian_svd(0.5 * (sub + sub.adjoint()));
  if (count > d.rank(1e-14))
    throw std::invalid_argument("singular_vector_data: requested " + std::to_string(count) +
                                " vectors but numerical rank is " + std::to_string(d.rank(1e-14)));
  SingularVectorData out;
  const auto nu = static_cast<Eigen::Index>(count);
  out.data.resize(sub.rows(), nu);
  out.response_singular_values.resize(nu);
  for (Eigen::Index j = 0; j < nu; ++j) {
    const double sp = std::sqrt(d.sigma(j));
    out.response_singular_values(j) = sp;
    out.data.col(j) = sp * d.v.col(j).conjugate();
    out.illuminations.push_back(
        custom_illumination(d.v.col(j), IlluminationKind::SingularVector, static_cast<std::size_t>(j)));
  }
  return out;
}

std::vector<std::size_t> row_support(const CMatrix& x, double tol) {
  if (!(tol >= 0.0)) throw std::invalid_argument("row_support: negative tolerance");
  std::vector<std::size_t> rows;
  if (x.size() == 0) return rows;
  const RVector norms = x.rowwise().norm();
  const double top = norms.maxCoeff();
  if (top == 0.0) return rows;
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (norms(i) > tol * top) rows.push_back(static_cast<std::size_t>(i));
  return rows;
}

double mixed_norm(const CMatrix& x, double p, double q) {
  if (!(p >= 1.0 && q >= 1.0)) throw std::invalid_argument("mixed_norm: p and q must be >= 1");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) row += std::pow(std::abs(x(i, j)), p);
    acc += std::pow(std::pow(row, 1.0 / p), q);
  }
  return std::pow(acc, 1.0 / q);
}

GelmaResult gelma_mmv(const CMatrix& sensing, const CMatrix& data, const GelmaParams& params) {
  if (sensing.rows() != data.rows())
    throw std::invalid_argument("gelma_mmv: sensing and data row counts differ");
  if (!(params.step > 0.0 && params.step < 1.0))
    throw std::invalid_argument("gelma_mmv: step must lie in (0, 1) on the normalised operator");
  if (!(params.regularization > 0.0)) throw std::invalid_argument("gelma_mmv: regularization must be positive");

  const auto k = sensing.cols();
  const auto nu = data.cols();
  GelmaResult result;
  result.sources = CMatrix::Zero(k, nu);
  const double data_norm = data.norm();
  if (data_norm == 0.0) {
    result.iterations = 1;
    result.converged = true;
    return result;
  }

  const double scale = Eigen::BDCSVD<CMatrix>(sensing).singularValues()(0);
  if (!(scale > 0.0)) throw std::invalid_argument("gelma_mmv: zero sensing matrix");
  const CMatrix g = sensing / scale;
  const CMatrix gram = g.adjoint() * g;
  const CMatrix correlation = g.adjoint() * data;  // G^* B
  const double beta = params.step;
  const double cut = beta * params.regularization * correlation.rowwise().norm().maxCoeff();

  // Z enters only through G^* Z, so the iteration carries u = G^* Z (K x nu)
  // and G^* R = G^* B - (G^* G) X over the active rows of X.
  CMatrix x = CMatrix::Zero(k, nu);
  CMatrix u = CMatrix::Zero(k, nu);
  CMatrix grad(k, nu);
  std::vector<Eigen::Index> rows;

  auto residual_norm = [&]() {
    CMatrix fit = CMatrix::Zero(g.rows(), nu);
    for (auto r : rows) fit.noalias() += g.col(r) * x.row(r);
    return (data - fit).norm() / data_norm;
  };

  double previous = std::numeric_limits<double>::infinity();
  std::size_t growth = 0;
  for (std::size_t it = 1; it <= params.max_iters; ++it) {
    grad = correlation;
    for (auto r : rows) grad.noalias() -= gram.col(r) * x.row(r);

    x.noalias() += beta * (u + grad);
    rows.clear();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double n = x.row(i).norm();
      if (n > cut) {
        x.row(i) *= (n - cut) / n;
        rows.push_back(i);
      } else {
        x.row(i).setZero();
      }
    }
    u.noalias() += beta * grad;

    result.iterations = it;
    if (it % params.check_every == 0 || it == params.max_iters) {
      const double rel = residual_norm();
      if (!std::isfinite(rel) || !x.allFinite()) throw SolverError("gelma_mmv", "non-finite iterate");
      result.relative_residual = rel;
      if (params.record_trace) result.trace.push_back({it, rel, mixed_norm(x, 2.0, 1.0) / scale});
      if (rel <= params.tolerance) {
        result.converged = true;
        break;
      }
      growth = rel > previous ? growth + 1 : 0;
      if (growth >= params.patience)
        throw SolverError("gelma_mmv", "residual grew for " + std::to_string(growth) + " consecutive checks");
      previous = rel;
    }
  }
  result.sources = x / scale;
  return result;
}

ReflectivityEstimate reflectivities_from_sources(const CMatrix& sources,
                                                 std::span<const IlluminationVector> illuminations,
                                                 const CMatrix& sensing,
                                                 std::span<const std::size_t> support,
                                                 double g_threshold, SourceAveraging averaging) {
  if (static_cast<std::size_t>(sources.cols()) != illuminations.size())
    throw std::invalid_argument("reflectivities_from_sources: one source column per illumination expected");
  const auto l = support.size();
  ReflectivityEstimate est;
  est.support.assign(support.begin(), support.end());
  est.values.assign(l, Complex{});
  est.resolved.assign(l, false);

  std::vector<Complex> sum(l);
  std::vector<double> weight(l, 0.0);
  std::vector<std::size_t> count(l, 0);
  for (std::size_t j = 0; j < illuminations.size(); ++j) {
    const CVector field = incident_field(sensing, illuminations[j].weights);
    const double admit = g_threshold * field.cwiseAbs().maxCoeff();
    std::vector<Complex> ratio(l);
    std::vector<double> w(l, 1.0);
    std::vector<bool> ok(l, false);
    for (std::size_t s = 0; s < l; ++s) {
      const auto px = static_cast<Eigen::Index>(support[s]);
      if (std::abs(field(px)) > admit && std::abs(field(px)) > 0.0) {
        ok[s] = true;
        ratio[s] = sources(px, static_cast<Eigen::Index>(j)) / field(px);
        if (averaging == SourceAveraging::FieldWeighted) w[s] = std::norm(field(px));
      }
    }
    // Align this illumination's global phase with the running average.
    Complex overlap{};
    bool any_prior = false;
    for (std::size_t s = 0; s < l; ++s) {
      if (!ok[s] || count[s] == 0) continue;
      overlap += (sum[s] / weight[s]) * std::conj(ratio[s]);
      any_prior = true;
    }
    const bool first = std::all_of(count.begin(), count.end(), [](auto c) { return c == 0; });
    if (!first && (!any_prior || std::abs(overlap) == 0.0)) continue;
    const Complex phase = first ? Complex{1.0, 0.0} : overlap / std::abs(overlap);
    for (std::size_t s = 0; s < l; ++s) {
      if (!ok[s]) continue;
      sum[s] += w[s] * phase * ratio[s];
      weight[s] += w[s];
      ++count[s];
    }
  }
  for (std::size_t s = 0; s < l; ++s) {
    if (count[s] == 0) continue;
    est.resolved[s] = true;
    est.values[s] = sum[s] / weight[s];
  }
  return est;
}

ImageMap amplitude_map(std::size_t nx, std::size_t nz, std::span<const std::size_t> support,
                       std::span<const Complex> values) {
  ImageMap map;
  map.nx = nx;
  map.nz = nz;
  map.kind = MapKind::ReflectivityAmplitude;
  map.values = RVector::Zero(static_cast<Eigen::Index>(nx * nz));
  for (std::size_t s = 0; s < support.size(); ++s)
    map.values(static_cast<Eigen::Index>(support[s])) = std::abs(values[s]);
  map.support.assign(support.begin(), support.end());
  return map;
}

}  // namespace phaseless
