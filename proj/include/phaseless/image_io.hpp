#pragma once

#include "phaseless/image.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace phaseless {

enum class ImageFormat { Csv, Pgm };

/// CSV: header "ix,iy,value", one row per pixel, iy outer and ix inner.
void write_image_csv(const ImageMap& map, std::ostream& out);
/// PGM P2 with maxval 255. Values are scaled linearly so that the map minimum
/// maps to 0 and the maximum to 255; a constant map is all 255.
void write_image_pgm(const ImageMap& map, std::ostream& out);

/// Throws std::runtime_error on I/O failure.
void export_image(const ImageMap& map, const std::filesystem::path& path, ImageFormat format);

/// Inverse of write_image_csv. The grid size is taken from the largest
/// indices present; missing pixels are zero. Support is left empty.
ImageMap parse_image_csv(std::istream& in, MapKind kind = MapKind::Music);
ImageMap read_image_csv(const std::filesystem::path& path, MapKind kind = MapKind::Music);

}  // namespace phaseless
