#include "phaseless/acquisition.hpp"

#include <stdexcept>

namespace phaseless {

std::string IlluminationVector::tag() const {
  switch (kind) {
    case IlluminationKind::Single:
      return "e" + std::to_string(first);
    case IlluminationKind::PairSum:
      return "e" + std::to_string(first) + "+e" + std::to_string(second);
    case IlluminationKind::PairQuadrature:
      return "e" + std::to_string(first) + "-ie" + std::to_string(second);
    case IlluminationKind::SingularVector:
      return "v" + std::to_string(first);
    case IlluminationKind::Custom:
      break;
  }
  return "custom";
}

IlluminationVector illumination_basis(IlluminationKind kind, std::size_t num_transducers,
                                      std::size_t i, std::size_t j) {
  if (i >= num_transducers) throw std::out_of_range("illumination_basis: index i out of range");
  IlluminationVector f;
  f.kind = kind;
  f.first = i;
  f.weights = CVector::Zero(static_cast<Eigen::Index>(num_transducers));
  const auto ii = static_cast<Eigen::Index>(i);
  switch (kind) {
    case IlluminationKind::Single:
      f.weights(ii) = 1.0;
      return f;
    case IlluminationKind::PairSum:
    case IlluminationKind::PairQuadrature: {
      if (j >= num_transducers) throw std::out_of_range("illumination_basis: index j out of range");
      if (i == j) throw std::invalid_argument("illumination_basis: pair illumination needs i != j");
      f.second = j;
      f.weights(ii) = 1.0;
      f.weights(static_cast<Eigen::Index>(j)) =
          kind == IlluminationKind::PairSum ? Complex{1.0, 0.0} : Complex{0.0, -1.0};
      return f;
    }
    case IlluminationKind::SingularVector:
    case IlluminationKind::Custom:
      break;
  }
  throw std::invalid_argument("illumination_basis: only canonical kinds have a basis form");
}

IlluminationVector custom_illumination(CVector weights, IlluminationKind kind, std::size_t index) {
  IlluminationVector f;
  f.weights = std::move(weights);
  f.kind = kind;
  f.first = index;
  return f;
}

IntensityVector intensities(const CMatrix& response, const IlluminationVector& f) {
  if (response.cols() != f.weights.size())
    throw std::invalid_argument("intensities: illumination length does not match the array");
  CVector received = CVector::Zero(response.rows());
  for (Eigen::Index c = 0; c < f.weights.size(); ++c) {
    const Complex w = f.weights(c);
    if (w != Complex{}) received.noalias() += w * response.col(c);
  }
  return {received.cwiseAbs2(), 0.0};
}

double total_power(const IntensityVector& b) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < b.values.size(); ++i) sum += b.values(i);
  return sum;
}

double total_power(const CMatrix& response, const IlluminationVector& f) {
  return total_power(intensities(response, f));
}

IntensityVector add_intensity_noise(const IntensityVector& b, double eps, RandomStream& rng) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("add_intensity_noise: noise strength must lie in [0, 1)");
  IntensityVector out = b;
  out.noise_level = eps;
  if (eps == 0.0) return out;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    const double clean = b.values(i);
    out.values(i) = rng.uniform((1.0 - eps) * clean, (1.0 + eps) * clean);
  }
  return out;
}

IntensityVector add_intensity_noise(const IntensityVector& b, double eps, std::uint64_t seed,
                                    std::uint64_t stream) {
  RandomStream rng(seed, stream);
  return add_intensity_noise(b, eps, rng);
}

PhaselessInstrument::PhaselessInstrument(CMatrix response, double noise_level, std::uint64_t seed)
    : response_(std::move(response)), noise_level_(noise_level), seed_(seed) {
  if (response_.rows() != response_.cols())
    throw std::invalid_argument("PhaselessInstrument: response matrix must be square");
  if (!(noise_level >= 0.0 && noise_level < 1.0))
    throw std::invalid_argument("PhaselessInstrument: noise strength must lie in [0, 1)");
}

IntensityVector PhaselessInstrument::measure_intensities(const IlluminationVector& f,
                                                         std::uint64_t id) const {
  return add_intensity_noise(intensities(response_, f), noise_level_, seed_, id);
}

double PhaselessInstrument::measure_total_power(const IlluminationVector& f,
                                                std::uint64_t id) const {
  return total_power(measure_intensities(f, id));
}

}  // namespace phaseless
