#pragma once

#include "phaseless/image.hpp"
#include "phaseless/metrics.hpp"
#include "phaseless/mmv.hpp"
#include "phaseless/polarization.hpp"
#include "phaseless/scenario.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace phaseless {

struct NamedMap {
  std::string name;
  ImageMap map;
};

struct RunResult {
  SceneConfig scene;
  IlluminationPlan plan;
  TimeReversalMatrix matrix;  ///< recovered (and completed) time-reversal matrix
  std::vector<NamedMap> maps;
  std::vector<GelmaTraceRow> gelma_trace;
  Metrics metrics;
};

/// Simulates, acquires, recovers M and images with the selected pipelines.
/// Deterministic given the scenario seed. Failures are rethrown as
/// SolverError naming the stage.
RunResult run_scenario(const Scenario& s);

/// Output root: $PHASELESS_OUTPUT_ROOT if set, otherwise "runs".
std::filesystem::path default_output_root();

/// Creates a fresh directory <root>/<name>/run-NNNN (never reusing one) and
/// writes the scenario, metrics, runtimes, recovered matrix, plan manifest and
/// every map as CSV and PGM. Returns the directory.
std::filesystem::path write_run(const RunResult& run, const Scenario& s, const std::filesystem::path& root);

}  // namespace phaseless
