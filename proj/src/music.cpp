#include "phaseless/music.hpp"

#include "phaseless/lowrank.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace phaseless {

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Music: return "music";
    case MapKind::ReflectivityAmplitude: return "reflectivity-amplitude";
    case MapKind::EffectiveSourceNorm: return "effective-source-norm";
  }
  return "unknown";
}

std::vector<std::size_t> extract_support(const ImageMap& map, std::size_t count) {
  const auto k = static_cast<std::size_t>(map.values.size());
  if (count == 0) throw std::invalid_argument("extract_support: count must be at least 1");
  if (count > k) throw std::invalid_argument("extract_support: count exceeds pixel count");
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return map.values(static_cast<Eigen::Index>(a)) > map.values(static_cast<Eigen::Index>(b));
  });
  order.resize(count);
  return order;
}

std::size_t estimate_signal_dim(std::span<const double> spectrum, double eta) {
  if (spectrum.empty() || !(spectrum.front() > 0.0)) return 0;
  const double cut = eta * spectrum.front();
  return static_cast<std::size_t>(
      std::count_if(spectrum.begin(), spectrum.end(), [cut](double s) { return s > cut; }));
}

SubspaceModel build_subspace_model(const TimeReversalMatrix& m, const MusicParams& params) {
  const CMatrix sub = m.active_submatrix();
  const SvdResult d = hermitian_svd(0.5 * (sub + sub.adjoint()));
  SubspaceModel model;
  model.spectrum = d.sigma;
  model.active_set = m.active_set;
  const std::span<const double> spec(d.sigma.data(), static_cast<std::size_t>(d.sigma.size()));
  if (estimate_signal_dim(spec, 0.0) == 0)
    throw std::invalid_argument("music: no signal subspace (time-reversal matrix is zero)");
  const std::size_t dim = params.signal_dim ? *params.signal_dim : estimate_signal_dim(spec, params.eta);
  if (dim > static_cast<std::size_t>(sub.rows()))
    throw std::invalid_argument("music: signal dimension exceeds the number of active transducers");
  model.signal_vectors = d.v.leftCols(static_cast<Eigen::Index>(dim));
  return model;
}

CVector noise_space_projection(const CVector& g, const SubspaceModel& model, ProjectionPairing pairing) {
  if (g.size() != model.signal_vectors.rows())
    throw std::invalid_argument("noise_space_projection: vector length does not match the subspace");
  const auto& v = model.signal_vectors;
  // (g^T V)_j for all j at once.
  const CVector coeff = v.transpose() * g;
  if (pairing == ProjectionPairing::Conjugate) return g - v.conjugate() * coeff;
  return g - v * coeff;
}

ImageMap music_map(const SubspaceModel& model, const SceneConfig& scene, const MusicParams& params) {
  if (scene.grid.size() == 0) throw std::invalid_argument("music_map: empty grid");
  const CMatrix sensing = select_rows(sensing_matrix(scene), model.active_set);
  const auto k = sensing.cols();

  const CMatrix& v = model.signal_vectors;
  const CMatrix coeff = v.transpose() * sensing;  // m x K
  const CMatrix basis = params.pairing == ProjectionPairing::Conjugate ? CMatrix(v.conjugate()) : v;
  const CMatrix projected = sensing - basis * coeff;

  const double floor = params.projection_floor * sensing.colwise().norm().maxCoeff();
  RVector norms(k);
  for (Eigen::Index j = 0; j < k; ++j) norms(j) = std::max(projected.col(j).norm(), floor);
  const double smallest = norms.minCoeff();

  ImageMap map;
  map.nx = scene.grid.nx;
  map.nz = scene.grid.nz;
  map.kind = MapKind::Music;
  map.values = norms.cwiseInverse() * smallest;
  if (model.dim() > 0) map.support = extract_support(map, model.dim());
  return map;
}

ImageMap music_map(const TimeReversalMatrix& m, const SceneConfig& scene, const MusicParams& params) {
  return music_map(build_subspace_model(m, params), scene, params);
}

}  // namespace phaseless
