#include "phaseless/runner.hpp"

#include "phaseless/image_io.hpp"
#include "phaseless/lowrank.hpp"
#include "phaseless/matrix_io.hpp"
#include "phaseless/music.hpp"
#include "phaseless/reflectivity.hpp"
#include "phaseless/rng.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace phaseless {

namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365ULL;

template <class F>
void stage(Metrics& metrics, const char* name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(name, e.what());
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
  metrics.runtimes.push_back({name, dt.count()});
}

double active_block_error(const TimeReversalMatrix& m, const CMatrix& truth) {
  const auto a = m.active_set.size();
  CMatrix ref(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
  for (std::size_t r = 0; r < a; ++r)
    for (std::size_t c = 0; c < a; ++c)
      ref(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          truth(static_cast<Eigen::Index>(m.active_set[r]), static_cast<Eigen::Index>(m.active_set[c]));
  return (m.active_submatrix() - ref).norm() / ref.norm();
}

ImageMap source_norm_map(const CMatrix& sources, const ImageGrid& grid, std::size_t dim) {
  ImageMap map;
  map.nx = grid.nx;
  map.nz = grid.nz;
  map.kind = MapKind::EffectiveSourceNorm;
  map.values = sources.rowwise().norm();
  map.support = extract_support(map, dim);
  return map;
}

std::vector<RVector> squared_magnitudes(const CMatrix& data) {
  std::vector<RVector> out;
  for (Eigen::Index j = 0; j < data.cols(); ++j) out.push_back(data.col(j).cwiseAbs2());
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <class F>
void write_with(const std::filesystem::path& path, F&& writer) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  s.validate();
  RunResult run;
  auto& metrics = run.metrics;

  CMatrix response, truth;
  stage(metrics, "simulate", [&] {
    run.scene = build_scene(s);
    response = response_matrix(run.scene);
    truth = response.adjoint() * response;
  });

  std::vector<double> powers;
  stage(metrics, "acquire", [&] {
    auto params = s.plan_params;
    params.seed = s.seed;
    run.plan = make_plan(s.plan, run.scene.num_transducers(), params);
    const PhaselessInstrument instrument(response, s.noise, RandomStream::mix(s.seed ^ kNoiseSalt));
    powers = acquire(instrument, run.plan);
  });

  stage(metrics, "recover", [&] { run.matrix = hermitian_symmetrize(recover_time_reversal(powers, run.plan)); });

  if (s.plan == PlanKind::RandomPairs && s.complete && !run.matrix.fully_known()) {
    stage(metrics, "complete", [&] {
      auto done = complete_matrix(run.matrix, s.completion);
      run.matrix.values = std::move(done.matrix);
      run.matrix.known.setConstant(run.matrix.values.rows(), run.matrix.values.cols(), true);
    });
  }
  metrics.matrix_recovery_error = active_block_error(run.matrix, truth);

  MusicParams music = s.music;
  if (s.signal_dim == SignalDimMode::Known)
    music.signal_dim = run.scene.scatterers.size();
  else if (s.signal_dim == SignalDimMode::Fixed)
    music.signal_dim = s.fixed_dim;

  SubspaceModel model;
  stage(metrics, "subspace", [&] { model = build_subspace_model(run.matrix, music); });
  const auto dim = model.dim();
  const bool reflectivity = s.plan != PlanKind::Edges;
  const CMatrix sensing = select_rows(sensing_matrix(run.scene), model.active_set);
  const auto& grid = run.scene.grid;

  if (s.pipeline != Pipeline::Mmv) {
    PipelineResult result{"music", {}, {}};
    stage(metrics, "music", [&] {
      auto map = music_map(model, run.scene, music);
      result.support = map.support;
      run.maps.push_back({"music", std::move(map)});
    });
    if (s.lift && reflectivity) {
      stage(metrics, "lift", [&] {
        const auto data = singular_vector_data(run.matrix, dim);
        const auto intensities = squared_magnitudes(data.data);
        const auto problem = make_lifted_problem(sensing, data.illuminations, intensities, result.support);
        const auto lifted = nuclear_min_reflectivity(problem, s.lift_params);
        RVector amps;
        try {
          amps = amplitudes_from_lift(lifted.lifted);
        } catch (const std::domain_error& e) {
          // A wrong MUSIC support usually cannot explain the intensities.
          metrics.warnings.push_back(std::string("lift: ") + e.what() + "; reflectivities unresolved");
          return;
        }
        for (Eigen::Index i = 0; i < amps.size(); ++i) result.reflectivities.emplace_back(amps(i), 0.0);
        run.maps.push_back({"music_reflectivity", amplitude_map(grid.nx, grid.nz, result.support, result.reflectivities)});
      });
    }
    metrics.pipelines.push_back(compute_metrics(run.scene, result));
  }

  if (s.pipeline != Pipeline::Music) {
    PipelineResult result{"mmv", {}, {}};
    SingularVectorData data;
    GelmaResult solved;
    stage(metrics, "mmv", [&] {
      data = singular_vector_data(run.matrix, dim);
      solved = gelma_mmv(sensing, data.data, s.gelma);
      auto map = source_norm_map(solved.sources, grid, dim);
      result.support = map.support;
      run.maps.push_back({"mmv_sources", std::move(map)});
      run.gelma_trace = solved.trace;
    });
    if (reflectivity) {
      stage(metrics, "mmv_reflectivity", [&] {
        const auto est = reflectivities_from_sources(solved.sources, data.illuminations, sensing, result.support,
                                                     s.source_threshold, s.averaging);
        result.reflectivities = est.values;
        run.maps.push_back({"mmv_reflectivity", amplitude_map(grid.nx, grid.nz, result.support, est.values)});
      });
    }
    metrics.pipelines.push_back(compute_metrics(run.scene, result));
  }
  return run;
}

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("PHASELESS_OUTPUT_ROOT"); env && *env) return env;
  return "runs";
}

std::filesystem::path write_run(const RunResult& run, const Scenario& s, const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  const auto parent = root / s.name;
  fs::create_directories(parent);
  fs::path dir;
  for (unsigned n = 1;; ++n) {
    char leaf[32];
    std::snprintf(leaf, sizeof leaf, "run-%04u", n);
    dir = parent / leaf;
    if (fs::create_directory(dir)) break;
  }

  auto resolved = scenario_to_json(s);
  resolved["scene"] = scene_to_json(run.scene, s.layout);
  write_text(dir / "scenario.json", resolved.dump(2) + "\n");
  write_text(dir / "metrics.json", metrics_to_json(run.metrics).dump(2) + "\n");
  write_text(dir / "runtimes.json", runtimes_to_json(run.metrics).dump(2) + "\n");
  write_with(dir / "matrix.csv", [&](std::ostream& o) { write_matrix_csv(run.matrix, o); });
  write_with(dir / "plan.csv", [&](std::ostream& o) { write_plan_manifest(run.plan, o); });
  for (const auto& [name, map] : run.maps) {
    export_image(map, dir / (name + ".csv"), ImageFormat::Csv);
    export_image(map, dir / (name + ".pgm"), ImageFormat::Pgm);
  }
  if (!run.gelma_trace.empty())
    write_with(dir / "gelma_trace.csv", [&](std::ostream& o) { write_gelma_trace(run.gelma_trace, o); });
  return dir;
}

}  // namespace phaseless
