#pragma once

#include "phaseless/acquisition.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace phaseless {

/// Support-restricted lift of the intensity equations |A rho|^2 = b_I.
/// Blocks for several illuminations are stacked row-wise, so the stacked
/// operator obeys the single-illumination contract block by block.
struct LiftedProblem {
  CMatrix op;            ///< (nu * N_active) x L
  RVector intensities;   ///< length nu * N_active
  std::vector<std::size_t> support;

  std::size_t unknowns() const { return support.size(); }
};

inline constexpr std::size_t kDefaultMaxLiftSize = 64;

/// Builds A_f restricted to `support` for each illumination and stacks them.
/// Throws std::invalid_argument for an empty support, a support larger than
/// `max_unknowns`, or mismatched intensity blocks.
LiftedProblem make_lifted_problem(const CMatrix& sensing, std::span<const IlluminationVector> illuminations,
                                  std::span<const RVector> intensities, std::span<const std::size_t> support,
                                  std::size_t max_unknowns = kDefaultMaxLiftSize);

/// diag(A Y A^*), real.
RVector lift_forward(const CMatrix& y, const CMatrix& op);

/// A^* diag(c) A, Hermitian. Adjoint of lift_forward under the real inner
/// products <c, d> = c^T d and <Y, Z> = Re tr(Y^* Z).
CMatrix lift_adjoint(const RVector& c, const CMatrix& op);

enum class LiftMode { SoftThreshold, RankOne };

/// Zero `step` / `threshold` select 0.9 / ||L^* L|| (power iteration) and
/// 1e-3 ||L^*(b)||_2.
struct LiftParams {
  double step = 0.0;
  double threshold = 0.0;
  std::size_t max_iters = 5000;
  double tolerance = 1e-12;  ///< relative change between iterates
  LiftMode mode = LiftMode::SoftThreshold;
  std::size_t power_iterations = 20;
};

struct LiftResult {
  CMatrix lifted;  ///< L x L Hermitian
  std::size_t iterations = 0;
  double relative_residual = 0.0;  ///< ||L(Y) - b|| / ||b||
  bool converged = false;
  std::vector<double> nuclear_norms;  ///< per iteration
};

/// Spectral norm of L^* L by power iteration.
double lift_operator_norm(const CMatrix& op, std::size_t iterations, std::uint64_t seed = 1);

/// Accelerated proximal gradient for min ||Y||_* s.t. L(Y) = b:
///   w = (t_{k-1} - 1) / t_k,  W = (1 + w) Y_k - w Y_{k-1},
///   G = W - beta L^*(L(W) - b),  Y_{k+1} = S_tau(G),
///   t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2,   with Y_{-1} = Y_0 = 0, t_{-1} = t_0 = 1.
/// In RankOne mode S_tau is replaced by the best rank-1 approximation; that
/// variant is non-convex and may stall away from the true solution.
LiftResult nuclear_min_reflectivity(const LiftedProblem& problem, const LiftParams& params = {});

/// sqrt(max(Re Y_ii, 0)). Throws std::domain_error when a diagonal entry is
/// below -1e-6 * max_i |Y_ii|.
RVector amplitudes_from_lift(const CMatrix& y);

}  // namespace phaseless
