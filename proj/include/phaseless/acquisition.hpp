#pragma once

#include "phaseless/rng.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace phaseless {

enum class IlluminationKind {
  Single,          ///< e_i
  PairSum,         ///< e_i + e_j
  PairQuadrature,  ///< e_i - i e_j
  SingularVector,  ///< j-th right singular vector of the time-reversal matrix
  Custom,
};

/// Signals sent from the N transducers, plus what produced them. Transducer
/// indices are zero-based.
struct IlluminationVector {
  CVector weights;
  IlluminationKind kind = IlluminationKind::Custom;
  std::size_t first = 0;
  std::size_t second = 0;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
  /// Short label such as "e3", "e1+e2", "e1-ie2", "v0", "custom".
  std::string tag() const;
};

IlluminationVector illumination_basis(IlluminationKind kind, std::size_t num_transducers,
                                      std::size_t i, std::size_t j = 0);

/// Wraps an arbitrary vector as an illumination.
IlluminationVector custom_illumination(CVector weights,
                                       IlluminationKind kind = IlluminationKind::Custom,
                                       std::size_t index = 0);

/// Per-receiver intensities |(P f)_i|^2 and the noise strength they carry.
struct IntensityVector {
  RVector values;
  double noise_level = 0.0;
};

/// Clean intensities |(P f)_i|^2. Zero entries of f are skipped, so canonical
/// illuminations cost O(N) per nonzero.
IntensityVector intensities(const CMatrix& response, const IlluminationVector& f);

/// Sum of intensity entries, accumulated in receiver order.
double total_power(const IntensityVector& b);
double total_power(const CMatrix& response, const IlluminationVector& f);

/// Multiplicative uniform noise: entry i is drawn from
/// U[(1 - eps) b_i, (1 + eps) b_i]. eps must lie in [0, 1).
IntensityVector add_intensity_noise(const IntensityVector& b, double eps, RandomStream& rng);
IntensityVector add_intensity_noise(const IntensityVector& b, double eps, std::uint64_t seed,
                                    std::uint64_t stream = 0);

/// A phaseless instrument: it hides the response matrix and reports only
/// (noisy) total power. Noise for the illumination with id `id` comes from
/// stream `id` of `seed`, independent of evaluation order.
class PhaselessInstrument {
 public:
  PhaselessInstrument(CMatrix response, double noise_level, std::uint64_t seed);

  std::size_t num_transducers() const { return static_cast<std::size_t>(response_.rows()); }
  double noise_level() const { return noise_level_; }

  IntensityVector measure_intensities(const IlluminationVector& f, std::uint64_t id) const;
  double measure_total_power(const IlluminationVector& f, std::uint64_t id) const;

 private:
  CMatrix response_;
  double noise_level_;
  std::uint64_t seed_;
};

}  // namespace phaseless
