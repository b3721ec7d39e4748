#pragma once

#include "phaseless/acquisition.hpp"
#include "phaseless/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace phaseless {

enum class PlanKind { Full, RandomPairs, Edges };

struct PlanParams {
  double fraction = 1.0;       ///< RandomPairs: share of off-diagonal pairs kept, in (0, 1]
  std::uint64_t seed = 0;      ///< RandomPairs: pair selection seed
  std::size_t edge_count = 0;  ///< Edges: active transducers at each end, 1..N/2
};

/// Ordered illuminations for polarization-identity recovery of M = P* P.
///
/// Each active transducer i is fired alone once (`single_index[i]`); each
/// planned pair (i, j), i < j, adds e_i + e_j and e_i - i e_j
/// (`pair_index[p]` gives the positions of both in `illuminations`).
struct IlluminationPlan {
  PlanKind kind = PlanKind::Full;
  std::size_t num_transducers = 0;
  std::vector<std::size_t> active_set;
  std::vector<IlluminationVector> illuminations;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::pair<std::size_t, std::size_t>> pair_index;
  std::vector<std::size_t> single_index;  ///< indexed by transducer; npos if inactive

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t size() const { return illuminations.size(); }
};

IlluminationPlan make_plan(PlanKind kind, std::size_t num_transducers, const PlanParams& params = {});

/// Plan with the given active transducers and pairs (i < j, both active), in
/// the standard order: singles, then a (sum, quadrature) block per pair.
IlluminationPlan plan_from_pairs(PlanKind kind, std::size_t num_transducers, std::vector<std::size_t> active_set,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Total power for every planned illumination, in plan order.
std::vector<double> acquire(const PhaselessInstrument& instrument, const IlluminationPlan& plan);

/// Time-reversal matrix with entry availability. `known` is N x N; entries
/// outside it are zero and must not be used.
struct TimeReversalMatrix {
  CMatrix values;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> known;
  std::vector<std::size_t> active_set;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t known_count() const { return static_cast<std::size_t>(known.count()); }
  bool fully_known() const { return known.all(); }
  /// Principal submatrix over `active_set`.
  CMatrix active_submatrix() const;

  static TimeReversalMatrix from_full(CMatrix m);
};

/// Applies the polarization identity:
///   M_ii = ||P e_i||^2
///   Re M_ij = (||P(e_i + e_j)||^2 - M_ii - M_jj) / 2
///   Im M_ij = (||P(e_i - i e_j)||^2 - M_ii - M_jj) / 2
/// and fills M_ji = conj(M_ij). Throws std::invalid_argument when the power
/// count does not match the plan.
TimeReversalMatrix recover_time_reversal(std::span<const double> powers, const IlluminationPlan& plan);

/// (M + M*) / 2 on known entries. The mask must be symmetric.
TimeReversalMatrix hermitian_symmetrize(TimeReversalMatrix m);

}  // namespace phaseless
