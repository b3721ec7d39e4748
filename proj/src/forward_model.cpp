#include "phaseless/forward_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace phaseless {

double ImageGrid::diameter_cells() const {
  const double w = nx > 0 ? static_cast<double>(nx - 1) : 0.0;
  const double h = nz > 0 ? static_cast<double>(nz - 1) : 0.0;
  return std::hypot(w, h);
}

void SceneConfig::validate() const {
  if (transducers.empty()) throw std::invalid_argument("scene: no transducers");
  if (grid.size() == 0) throw std::invalid_argument("scene: empty image grid");
  if (!(grid.spacing > 0.0)) throw std::invalid_argument("scene: grid spacing must be positive");
  if (!(wavelength > 0.0)) throw std::invalid_argument("scene: wavelength must be positive");
  std::unordered_set<std::size_t> seen;
  for (const auto& s : scatterers) {
    if (s.grid_index >= grid.size())
      throw std::invalid_argument("scene: scatterer index " + std::to_string(s.grid_index) +
                                  " outside grid of " + std::to_string(grid.size()));
    if (!seen.insert(s.grid_index).second)
      throw std::invalid_argument("scene: duplicate scatterer at pixel " +
                                  std::to_string(s.grid_index));
  }
}

SceneConfig make_linear_array_scene(const LinearArrayLayout& layout,
                                    std::vector<Scatterer> scatterers) {
  SceneConfig scene;
  const auto n = layout.num_transducers;
  scene.transducers.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double offset = static_cast<double>(s) - 0.5 * static_cast<double>(n - 1);
    scene.transducers.push_back({offset * layout.transducer_spacing, 0.0});
  }
  scene.grid.nx = layout.nx;
  scene.grid.nz = layout.nz;
  scene.grid.spacing = layout.pixel_spacing;
  scene.grid.origin = {-0.5 * static_cast<double>(layout.nx - 1) * layout.pixel_spacing,
                       layout.range - 0.5 * static_cast<double>(layout.nz - 1) * layout.pixel_spacing};
  scene.range = layout.range;
  scene.scatterers = std::move(scatterers);
  scene.validate();
  return scene;
}

Complex green(const Point2& x, const Point2& y, double wavenumber) {
  const double r = distance(x, y);
  if (!(r > 0.0)) throw SingularEvaluation("green: coincident source and observation points");
  return std::polar(1.0 / (4.0 * std::numbers::pi * r), wavenumber * r);
}

CVector green_vector(const Point2& y, const SceneConfig& scene) {
  const double k = scene.wavenumber();
  CVector g(static_cast<Eigen::Index>(scene.num_transducers()));
  for (std::size_t s = 0; s < scene.num_transducers(); ++s)
    g(static_cast<Eigen::Index>(s)) = green(scene.transducers[s], y, k);
  return g;
}

CMatrix sensing_matrix(const SceneConfig& scene) {
  const auto n = static_cast<Eigen::Index>(scene.num_transducers());
  const auto k = static_cast<Eigen::Index>(scene.grid.size());
  CMatrix g(n, k);
  for (Eigen::Index j = 0; j < k; ++j)
    g.col(j) = green_vector(scene.grid.point(static_cast<std::size_t>(j)), scene);
  return g;
}

CVector reflectivity_vector(const SceneConfig& scene) {
  CVector rho = CVector::Zero(static_cast<Eigen::Index>(scene.grid.size()));
  for (const auto& s : scene.scatterers) rho(static_cast<Eigen::Index>(s.grid_index)) = s.reflectivity;
  return rho;
}

CMatrix response_matrix(const SceneConfig& scene) {
  const auto n = static_cast<Eigen::Index>(scene.num_transducers());
  CMatrix p = CMatrix::Zero(n, n);
  for (const auto& s : scene.scatterers) {
    const CVector g = green_vector(scene.grid.point(s.grid_index), scene);
    p.noalias() += s.reflectivity * (g * g.transpose());
  }
  return p;
}

CMatrix select_rows(const CMatrix& m, std::span<const std::size_t> rows) {
  CMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r)
    out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

}  // namespace phaseless
