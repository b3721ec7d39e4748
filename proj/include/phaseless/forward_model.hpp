#pragma once

#include "phaseless/types.hpp"

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace phaseless {

/// Uniform image-window lattice. Pixel k = iz * nx + ix (cross-range index
/// varies fastest). `origin` is the position of pixel (0, 0).
struct ImageGrid {
  Point2 origin;
  double spacing = 1.0;
  std::size_t nx = 0;
  std::size_t nz = 0;

  std::size_t size() const { return nx * nz; }
  std::size_t index(std::size_t ix, std::size_t iz) const { return iz * nx + ix; }
  std::size_t ix(std::size_t k) const { return k % nx; }
  std::size_t iz(std::size_t k) const { return k / nx; }
  Point2 point(std::size_t k) const {
    return {origin.x + spacing * static_cast<double>(ix(k)),
            origin.z + spacing * static_cast<double>(iz(k))};
  }
  /// Euclidean length of the grid diagonal, in grid cells.
  double diameter_cells() const;
};

struct Scatterer {
  std::size_t grid_index = 0;
  Complex reflectivity{};
};

/// Array geometry, image window and ground-truth scatterers. Lengths are in
/// wavelengths, so the wavenumber is 2*pi unless `wavelength` is changed.
struct SceneConfig {
  std::vector<Point2> transducers;
  ImageGrid grid;
  double wavelength = 1.0;
  double range = 0.0;  ///< nominal array-to-window distance (informational)
  std::vector<Scatterer> scatterers;

  std::size_t num_transducers() const { return transducers.size(); }
  double wavenumber() const { return 2.0 * std::numbers::pi / wavelength; }

  /// Throws std::invalid_argument if any invariant is broken (empty array,
  /// empty grid, non-positive spacing, duplicate or out-of-range scatterers).
  void validate() const;
};

/// Parameters of the standard layout: a linear array along the cross-range
/// axis centred at x = 0, and a square-pixel window centred at range `range`.
struct LinearArrayLayout {
  std::size_t num_transducers = 100;
  double transducer_spacing = 1.0;
  double range = 100.0;
  std::size_t nx = 30;
  std::size_t nz = 30;
  double pixel_spacing = 1.0;
};

SceneConfig make_linear_array_scene(const LinearArrayLayout& layout,
                                    std::vector<Scatterer> scatterers = {});

/// Free-space kernel exp(i k r) / (4 pi r).
Complex green(const Point2& x, const Point2& y, double wavenumber);

/// Illumination vector of the array targeting `y`: entry s is G(x_s, y).
CVector green_vector(const Point2& y, const SceneConfig& scene);

/// N x K matrix whose column j is green_vector(y_j).
CMatrix sensing_matrix(const SceneConfig& scene);

/// Length-K vector with the scatterer reflectivities at their pixels.
CVector reflectivity_vector(const SceneConfig& scene);

/// Full-phase response matrix P = sum_j alpha_j g(y_j) g(y_j)^T (Born, no
/// multiple scattering). Complex symmetric.
CMatrix response_matrix(const SceneConfig& scene);

/// Rows of `m` selected by `rows`, in order.
CMatrix select_rows(const CMatrix& m, std::span<const std::size_t> rows);

}  // namespace phaseless
