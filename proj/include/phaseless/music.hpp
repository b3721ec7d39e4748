#pragma once

#include "phaseless/forward_model.hpp"
#include "phaseless/image.hpp"
#include "phaseless/polarization.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace phaseless {

/// Number of spectrum entries above eta * spectrum[0]. The spectrum holds the
/// singular values of M (that is, sigma_j(P)^2) in descending order.
std::size_t estimate_signal_dim(std::span<const double> spectrum, double eta);

/// Signal subspace of the (active part of the) time-reversal matrix.
struct SubspaceModel {
  CMatrix signal_vectors;  ///< N_active x m, orthonormal columns V_1..V_m
  RVector spectrum;        ///< all singular values of M, descending
  std::vector<std::size_t> active_set;

  std::size_t dim() const { return static_cast<std::size_t>(signal_vectors.cols()); }
};

/// How g^T V_j multiplies back into the array space when removing the
/// signal component.
///  - Conjugate: g - sum (g^T V_j) conj(V_j). The signal space of M is
///    spanned by conj(g(y_m)), so this is the orthogonal projection of g onto
///    the noise space.
///  - Bilinear: g - sum (g^T V_j) V_j, the literal printed formula. It is not
///    a projection for complex V_j; kept for comparison.
enum class ProjectionPairing { Conjugate, Bilinear };

struct MusicParams {
  double eta = 1e-6;                        ///< signal-dimension threshold
  std::optional<std::size_t> signal_dim;   ///< overrides the estimate
  ProjectionPairing pairing = ProjectionPairing::Conjugate;
  /// Projection norms are floored at this fraction of max_k ||g(y_k)|| so that
  /// exact zeros (noise-free data) compare equal instead of as round-off.
  double projection_floor = 1e-10;
};

/// Hermitian SVD of M restricted to its active set. Throws
/// std::invalid_argument if M is identically zero ("no signal subspace") or if
/// a requested dimension exceeds the active size.
SubspaceModel build_subspace_model(const TimeReversalMatrix& m, const MusicParams& params = {});

CVector noise_space_projection(const CVector& g, const SubspaceModel& model,
                               ProjectionPairing pairing = ProjectionPairing::Conjugate);

/// MUSIC image min_j ||Pg(y_j)|| / ||Pg(y_s)|| over all pixels, with Green's
/// vectors restricted to the active transducers. Values lie in (0, 1] and the
/// support holds the `dim()` largest pixels.
ImageMap music_map(const SubspaceModel& model, const SceneConfig& scene, const MusicParams& params = {});
ImageMap music_map(const TimeReversalMatrix& m, const SceneConfig& scene, const MusicParams& params = {});

}  // namespace phaseless
