#pragma once

#include "phaseless/forward_model.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phaseless {

/// Estimated support of one pipeline and, optionally, reflectivities aligned
/// with it.
struct PipelineResult {
  std::string name;
  std::vector<std::size_t> support;
  std::vector<Complex> reflectivities;
};

struct PipelineMetrics {
  std::string name;
  std::vector<std::size_t> support;
  bool support_exact = false;
  double support_distance = 0.0;  ///< grid cells
  /// Per true scatterer, ||rho_est| - |rho|| / |rho|; a scatterer without a
  /// matched estimate counts as 1. Empty when no reflectivities were given.
  std::vector<double> reflectivity_errors;
  std::optional<double> max_reflectivity_error;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct Metrics {
  std::optional<double> matrix_recovery_error;  ///< ||M - P^*P||_F / ||P^*P||_F on the active block
  std::vector<PipelineMetrics> pipelines;
  std::vector<StageTiming> runtimes;
  /// Non-fatal stage problems, e.g. a lift that is inconsistent with its support.
  std::vector<std::string> warnings;

  const PipelineMetrics* find(const std::string& name) const;
  /// True when every pipeline found the exact support.
  bool support_exact() const;
};

/// Greedy matching: candidate pairs are taken in order of increasing
/// distance, each pixel used once. Every unmatched pixel, estimated or true,
/// adds the grid diameter.
PipelineMetrics compute_metrics(const SceneConfig& truth, const PipelineResult& result);

/// Everything except runtimes, so that reruns produce identical files.
nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json runtimes_to_json(const Metrics& m);

}  // namespace phaseless
