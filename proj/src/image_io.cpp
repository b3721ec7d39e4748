#include "phaseless/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace phaseless {

namespace {

void check_shape(const ImageMap& map) {
  if (map.nx == 0 || map.nz == 0 || static_cast<std::size_t>(map.values.size()) != map.size())
    throw std::invalid_argument("image map: values do not match nx * nz");
}

}  // namespace

void write_image_csv(const ImageMap& map, std::ostream& out) {
  check_shape(map);
  out << "ix,iy,value\n";
  char buf[64];
  for (std::size_t iz = 0; iz < map.nz; ++iz)
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      std::snprintf(buf, sizeof buf, "%.17g", map.values(static_cast<Eigen::Index>(iz * map.nx + ix)));
      out << ix << ',' << iz << ',' << buf << '\n';
    }
}

void write_image_pgm(const ImageMap& map, std::ostream& out) {
  check_shape(map);
  const double lo = map.values.minCoeff();
  const double hi = map.values.maxCoeff();
  out << "P2\n" << map.nx << ' ' << map.nz << "\n255\n";
  for (std::size_t iz = 0; iz < map.nz; ++iz) {
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      const double v = map.values(static_cast<Eigen::Index>(iz * map.nx + ix));
      const long level = hi > lo ? std::lround(255.0 * (v - lo) / (hi - lo)) : 255;
      out << (ix ? " " : "") << std::clamp(level, 0L, 255L);
    }
    out << '\n';
  }
}

void export_image(const ImageMap& map, const std::filesystem::path& path, ImageFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == ImageFormat::Csv)
    write_image_csv(map, out);
  else
    write_image_pgm(map, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ImageMap parse_image_csv(std::istream& in, MapKind kind) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ix,iy,value", 0) != 0)
    throw std::runtime_error("image csv: missing header \"ix,iy,value\"");
  std::vector<std::tuple<std::size_t, std::size_t, double>> rows;
  std::size_t nx = 0, nz = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::size_t ix = 0, iz = 0;
    double v = 0.0;
    char c1 = 0, c2 = 0;
    if (!(ss >> ix >> c1 >> iz >> c2 >> v) || c1 != ',' || c2 != ',')
      throw std::runtime_error("image csv: malformed row \"" + line + "\"");
    nx = std::max(nx, ix + 1);
    nz = std::max(nz, iz + 1);
    rows.emplace_back(ix, iz, v);
  }
  if (rows.empty()) throw std::runtime_error("image csv: no pixels");
  ImageMap map;
  map.nx = nx;
  map.nz = nz;
  map.kind = kind;
  map.values = RVector::Zero(static_cast<Eigen::Index>(nx * nz));
  for (const auto& [ix, iz, v] : rows) map.values(static_cast<Eigen::Index>(iz * nx + ix)) = v;
  return map;
}

ImageMap read_image_csv(const std::filesystem::path& path, MapKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_image_csv(in, kind);
}

}  // namespace phaseless
