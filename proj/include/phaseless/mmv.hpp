#pragma once

#include "phaseless/acquisition.hpp"
#include "phaseless/image.hpp"
#include "phaseless/polarization.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace phaseless {

/// A_f = G diag(G^T f): column k is g_f(y_k) g(y_k) with g_f(y_k) = g(y_k)^T f,
/// so that P f = A_f rho for P = G diag(rho) G^T.
CMatrix build_forward_operator(const CMatrix& sensing, const CVector& f);

/// Field g(y_k)^T f at every pixel.
CVector incident_field(const CMatrix& sensing, const CVector& f);

/// Phase-free data for the singular-vector illuminations: column j of `data`
/// is sqrt(sigma_j(M)) conj(V_j), i.e. P V_j up to an unknown global phase.
struct SingularVectorData {
  std::vector<IlluminationVector> illuminations;
  CMatrix data;
  RVector response_singular_values;  ///< sigma_j(P) = sqrt(sigma_j(M))
};

/// Uses the principal submatrix over `m.active_set`; vectors have length
/// N_active. Throws std::invalid_argument if `count` is 0 or exceeds the
/// numerical rank.
SingularVectorData singular_vector_data(const TimeReversalMatrix& m, std::size_t count);

/// GeLMA-MMV parameters. The solver runs on the sensing matrix scaled to unit
/// spectral norm, so `step` is the step on that scaled operator and must lie
/// in (0, 1). `regularization` is a fraction of max_i ||(G^* B)_i|| on the
/// same scale.
struct GelmaParams {
  double step = 0.9;
  double regularization = 0.5;
  std::size_t max_iters = 20000;
  double tolerance = 1e-8;      ///< stop when ||B - G X||_F <= tolerance ||B||_F
  std::size_t check_every = 10;
  std::size_t patience = 200;   ///< consecutive residual increases tolerated (in checks)
  bool record_trace = false;
};

struct GelmaTraceRow {
  std::size_t iteration = 0;
  double relative_residual = 0.0;
  double j21 = 0.0;
};

struct GelmaResult {
  CMatrix sources;  ///< K x nu effective sources in physical units
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<GelmaTraceRow> trace;
};

/// Solves min J_{2,1}(X) s.t. G X = B with the four-step GeLMA iteration:
///   R = B - G X;  X += beta G^*(Z + R);  row-shrink X by beta tau;  Z += beta R.
/// Rows with ||X_i|| <= beta tau are set to zero.
GelmaResult gelma_mmv(const CMatrix& sensing, const CMatrix& data, const GelmaParams& params = {});

/// {i : ||X_i||_2 > tol * max_i ||X_i||_2}, ascending. Empty for X = 0.
std::vector<std::size_t> row_support(const CMatrix& x, double tol);

/// l_q norm of the vector of row l_p norms.
double mixed_norm(const CMatrix& x, double p, double q);

struct ReflectivityEstimate {
  std::vector<std::size_t> support;
  std::vector<Complex> values;
  std::vector<bool> resolved;  ///< false when no illumination passed the threshold
};

/// How per-illumination ratios are combined.
///  - Uniform: plain mean of the admissible ratios.
///  - FieldWeighted: weights |g_f(y_i)|^2, the least-squares fit of
///    rho_i g_f(y_i) to the recovered sources.
enum class SourceAveraging { Uniform, FieldWeighted };

/// Divides each effective source by the incident field of its illumination
/// and averages over admissible illuminations (|g_f(y_i)| above
/// `g_threshold * max_k |g_f(y_k)|`). Each illumination carries its own
/// unknown global phase; it is aligned to the running average over the
/// pixels both share before averaging, so the output is determined up to a
/// single global phase.
ReflectivityEstimate reflectivities_from_sources(const CMatrix& sources,
                                                 std::span<const IlluminationVector> illuminations,
                                                 const CMatrix& sensing,
                                                 std::span<const std::size_t> support,
                                                 double g_threshold = 1e-2,
                                                 SourceAveraging averaging = SourceAveraging::FieldWeighted);

/// Amplitude image with zeros off the support.
ImageMap amplitude_map(std::size_t nx, std::size_t nz, std::span<const std::size_t> support,
                       std::span<const Complex> values);

}  // namespace phaseless
