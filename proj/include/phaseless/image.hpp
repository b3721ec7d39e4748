#pragma once

#include "phaseless/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace phaseless {

enum class MapKind { Music, ReflectivityAmplitude, EffectiveSourceNorm };

std::string to_string(MapKind kind);

/// Scalar field over the image grid (row-major, cross-range fastest) plus the
/// support extracted from it.
struct ImageMap {
  std::size_t nx = 0;
  std::size_t nz = 0;
  RVector values;
  std::vector<std::size_t> support;
  MapKind kind = MapKind::Music;

  std::size_t size() const { return nx * nz; }
};

/// Indices of the `count` largest values, ties broken by the lower index.
/// Returned in decreasing value order. Throws std::invalid_argument when
/// count is 0 or exceeds the pixel count.
std::vector<std::size_t> extract_support(const ImageMap& map, std::size_t count);

}  // namespace phaseless
