#pragma once

#include "phaseless/forward_model.hpp"
#include "phaseless/lowrank.hpp"
#include "phaseless/mmv.hpp"
#include "phaseless/music.hpp"
#include "phaseless/polarization.hpp"
#include "phaseless/reflectivity.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phaseless {

enum class Pipeline { Music, Mmv, Both };

/// Seeded random scatterers: magnitudes uniform on [min_magnitude,
/// max_magnitude], phases uniform on [0, 2 pi), pixels drawn without
/// replacement subject to a minimum pairwise distance (in wavelengths).
struct RandomScatterers {
  std::size_t count = 5;
  double min_magnitude = 0.5;
  double max_magnitude = 1.5;
  double min_separation = 3.0;
};

/// How many singular vectors MUSIC and MMV use.
///  - Known: the true scatterer count of the scene.
///  - Estimate: threshold the spectrum with MusicParams::eta.
///  - Fixed: `fixed_dim`.
enum class SignalDimMode { Known, Estimate, Fixed };

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  LinearArrayLayout layout;
  std::vector<Scatterer> scatterers;        ///< used when `random` is empty
  std::optional<RandomScatterers> random;

  PlanKind plan = PlanKind::Full;
  PlanParams plan_params;
  double noise = 0.0;
  Pipeline pipeline = Pipeline::Both;

  SignalDimMode signal_dim = SignalDimMode::Known;
  std::size_t fixed_dim = 0;

  MusicParams music;
  GelmaParams gelma;
  CompletionParams completion;
  /// Runs matrix completion when the plan leaves pairs unmeasured.
  bool complete = true;
  double source_threshold = 1e-2;  ///< g_threshold of reflectivities_from_sources
  SourceAveraging averaging = SourceAveraging::FieldWeighted;
  /// Reflectivities on the MUSIC support by the lifted nuclear-norm problem.
  bool lift = true;
  LiftParams lift_params;

  void validate() const;
};

/// Deterministic draw on `grid` from stream (seed, stream). Throws
/// std::runtime_error when the separation constraint cannot be met.
std::vector<Scatterer> draw_scatterers(const ImageGrid& grid, const RandomScatterers& spec, std::uint64_t seed);

/// Scene with the scenario's scatterers (drawn if random).
SceneConfig build_scene(const Scenario& s);

std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
/// Throws std::invalid_argument for an unknown name.
Scenario preset(const std::string& name);

nlohmann::json scene_to_json(const SceneConfig& scene, const LinearArrayLayout& layout);
/// Reads the layout fields and the scatterer list {ix, iy, re, im}.
SceneConfig scene_from_json(const nlohmann::json& j, LinearArrayLayout* layout = nullptr);

nlohmann::json scenario_to_json(const Scenario& s);
/// A config may name a "preset" to start from; other fields override it.
Scenario scenario_from_json(const nlohmann::json& j);

std::string to_string(Pipeline p);
std::string to_string(SignalDimMode m);

}  // namespace phaseless
