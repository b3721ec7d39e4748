// Command-line front end for the phaseless imaging library.

#include "phaseless/acquisition.hpp"
#include "phaseless/forward_model.hpp"
#include "phaseless/image_io.hpp"
#include "phaseless/lowrank.hpp"
#include "phaseless/matrix_io.hpp"
#include "phaseless/mmv.hpp"
#include "phaseless/music.hpp"
#include "phaseless/polarization.hpp"
#include "phaseless/reflectivity.hpp"
#include "phaseless/runner.hpp"
#include "phaseless/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace phaseless;
using nlohmann::json;

namespace {

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

template <class F>
void write_file(const fs::path& path, F&& writer) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  writer(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

template <class T, class R>
T read_file(const fs::path& path, R&& reader) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return reader(in);
}

void save_map(const ImageMap& map, const fs::path& dir, const std::string& stem) {
  fs::create_directories(dir);
  export_image(map, dir / (stem + ".csv"), ImageFormat::Csv);
  export_image(map, dir / (stem + ".pgm"), ImageFormat::Pgm);
}

void print_support(const std::string& label, const std::vector<std::size_t>& support, const ImageGrid& grid) {
  std::cout << label << ":";
  for (auto k : support) std::cout << " (" << grid.ix(k) << "," << grid.iz(k) << ")";
  std::cout << "\n";
}

// Scene from --scene, or from a preset drawn with --seed.
SceneConfig resolve_scene(const std::string& scene_path, const std::string& preset_name,
                          std::optional<std::uint64_t> seed) {
  if (!scene_path.empty()) return scene_from_json(load_json(scene_path));
  if (preset_name.empty()) throw CLI::ValidationError("--scene or --preset is required");
  auto s = preset(preset_name);
  if (seed) s.seed = *seed;
  return build_scene(s);
}

std::optional<std::size_t> dim_option(int dim, const SceneConfig& scene, bool estimate) {
  if (dim > 0) return static_cast<std::size_t>(dim);
  if (!estimate && !scene.scatterers.empty()) return scene.scatterers.size();
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phaseless active-array imaging: simulation, polarization recovery, MUSIC and MMV"};
  app.require_subcommand(1);

  // list-presets
  auto* list = app.add_subcommand("list-presets", "Print the available scenario presets");

  // simulate
  std::string sim_scene, sim_preset, sim_out = "simulate";
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Write the response matrix P and the oracle M = P*P");
  simulate->add_option("--scene", sim_scene, "Scene JSON file");
  simulate->add_option("--preset", sim_preset, "Draw the scene of a preset instead");
  simulate->add_option("--seed", sim_seed, "Seed for the preset draw");
  simulate->add_option("--out", sim_out, "Output directory");

  // acquire
  std::string acq_scene, acq_preset, acq_plan = "full", acq_out = "acquire";
  double acq_fraction = 1.0, acq_noise = 0.0;
  std::size_t acq_edges = 0;
  std::uint64_t acq_seed = 1;
  auto* acquire_cmd = app.add_subcommand("acquire", "Run an illumination plan and record intensities");
  acquire_cmd->add_option("--scene", acq_scene, "Scene JSON file");
  acquire_cmd->add_option("--preset", acq_preset, "Draw the scene of a preset instead");
  acquire_cmd->add_option("--plan", acq_plan, "full | random-pairs | edges");
  acquire_cmd->add_option("--fraction", acq_fraction, "Share of pairs kept (random-pairs)");
  acquire_cmd->add_option("--edges", acq_edges, "Active transducers per edge (edges)");
  acquire_cmd->add_option("--noise", acq_noise, "Multiplicative noise level eps");
  acquire_cmd->add_option("--seed", acq_seed, "Noise and pair-selection seed");
  acquire_cmd->add_option("--out", acq_out, "Output directory");

  // recover-m
  std::string rec_meas, rec_plan, rec_out = "matrix.csv";
  bool rec_complete = false;
  auto* recover = app.add_subcommand("recover-m", "Polarization-identity recovery of M, optionally completed");
  recover->add_option("--measurements", rec_meas, "measurements.csv from acquire")->required();
  recover->add_option("--plan", rec_plan, "plan.csv from acquire")->required();
  recover->add_flag("--complete", rec_complete, "Fill unmeasured entries by nuclear-norm completion");
  recover->add_option("--out", rec_out, "Output matrix CSV");

  // image
  std::string img_method, img_matrix, img_scene, img_out = "image";
  int img_dim = 0;
  bool img_estimate = false;
  double img_eta = 1e-6;
  auto* image = app.add_subcommand("image", "Image a recovered matrix with MUSIC or MMV");
  image->add_option("method", img_method, "music | mmv")->required()->check(CLI::IsMember({"music", "mmv"}));
  image->add_option("--matrix", img_matrix, "Matrix CSV")->required();
  image->add_option("--scene", img_scene, "Scene JSON (array and window; scatterers set the default dimension)")
      ->required();
  image->add_option("--dim", img_dim, "Signal-subspace dimension");
  image->add_flag("--estimate", img_estimate, "Estimate the dimension from the spectrum");
  image->add_option("--eta", img_eta, "Threshold for --estimate");
  image->add_option("--out", img_out, "Output directory");

  // reflectivity
  std::string ref_matrix, ref_scene, ref_out = "reflectivity", ref_method = "lift";
  int ref_dim = 0;
  auto* reflect = app.add_subcommand("reflectivity", "Reflectivities on the MUSIC support (lift) or from MMV sources");
  reflect->add_option("--matrix", ref_matrix, "Matrix CSV")->required();
  reflect->add_option("--scene", ref_scene, "Scene JSON")->required();
  reflect->add_option("--method", ref_method, "lift | mmv")->check(CLI::IsMember({"lift", "mmv"}));
  reflect->add_option("--dim", ref_dim, "Signal-subspace dimension");
  reflect->add_option("--out", ref_out, "Output directory");

  // run
  std::string run_preset, run_config, run_out;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Run a preset or a scenario config end to end");
  run->add_option("preset", run_preset, "Preset name");
  run->add_option("--config", run_config, "Scenario JSON file");
  run->add_option("--seed", run_seed, "Override the scenario seed");
  run->add_option("--out", run_out, "Output root (default $PHASELESS_OUTPUT_ROOT or ./runs)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const auto& name : preset_names()) std::cout << name << "\n";
      return 0;
    }

    if (*simulate) {
      const auto scene = resolve_scene(sim_scene, sim_preset, sim_seed);
      const CMatrix p = response_matrix(scene);
      const fs::path dir = sim_out;
      write_file(dir / "scene.json", [&](std::ostream& o) {
        LinearArrayLayout layout;
        if (!sim_scene.empty()) scene_from_json(load_json(sim_scene), &layout);
        o << scene_to_json(scene, layout).dump(2) << "\n";
      });
      write_file(dir / "response.csv", [&](std::ostream& o) { write_complex_csv(p, o); });
      write_file(dir / "oracle_matrix.csv",
                 [&](std::ostream& o) { write_matrix_csv(TimeReversalMatrix::from_full(p.adjoint() * p), o); });
      std::cout << "wrote " << dir.string() << "\n";
      return 0;
    }

    if (*acquire_cmd) {
      const auto scene = resolve_scene(acq_scene, acq_preset, acq_seed);
      PlanParams params;
      params.fraction = acq_fraction;
      params.edge_count = acq_edges;
      params.seed = acq_seed;
      const auto plan = make_plan(parse_plan_kind(acq_plan), scene.num_transducers(), params);
      const PhaselessInstrument instrument(response_matrix(scene), acq_noise, acq_seed);
      std::vector<IntensityVector> measured;
      measured.reserve(plan.size());
      for (std::size_t k = 0; k < plan.size(); ++k)
        measured.push_back(instrument.measure_intensities(plan.illuminations[k], k));
      const fs::path dir = acq_out;
      write_file(dir / "measurements.csv", [&](std::ostream& o) { write_measurements(measured, o); });
      write_file(dir / "plan.csv", [&](std::ostream& o) { write_plan_manifest(plan, o); });
      write_file(dir / "powers.csv", [&](std::ostream& o) {
        o << "illumination_id,tag,power\n";
        const auto powers = total_powers(measured);
        char buf[40];
        for (std::size_t k = 0; k < powers.size(); ++k) {
          std::snprintf(buf, sizeof buf, "%.17g", powers[k]);
          o << k << ',' << plan.illuminations[k].tag() << ',' << buf << '\n';
        }
      });
      std::cout << plan.size() << " illuminations written to " << dir.string() << "\n";
      return 0;
    }

    if (*recover) {
      const auto plan = read_file<IlluminationPlan>(rec_plan, [](std::istream& in) { return read_plan_manifest(in); });
      const auto measured =
          read_file<std::vector<IntensityVector>>(rec_meas, [](std::istream& in) { return read_measurements(in); });
      auto m = hermitian_symmetrize(recover_time_reversal(total_powers(measured), plan));
      if (rec_complete && !m.fully_known()) {
        const auto done = complete_matrix(m);
        std::cout << "completion: " << done.iterations << " iterations, residual " << done.relative_residual << "\n";
        m.values = done.matrix;
        m.known.setConstant(m.values.rows(), m.values.cols(), true);
      }
      write_file(rec_out, [&](std::ostream& o) { write_matrix_csv(m, o); });
      std::cout << "known entries: " << m.known_count() << " of " << m.size() * m.size() << "\n";
      return 0;
    }

    if (*image) {
      const auto scene = scene_from_json(load_json(img_scene));
      const auto m = read_file<TimeReversalMatrix>(img_matrix, [](std::istream& in) { return read_matrix_csv(in); });
      MusicParams params;
      params.eta = img_eta;
      params.signal_dim = dim_option(img_dim, scene, img_estimate);
      const auto model = build_subspace_model(m, params);
      if (img_method == "music") {
        const auto map = music_map(model, scene, params);
        save_map(map, img_out, "music");
        print_support("music support", map.support, scene.grid);
      } else {
        const auto data = singular_vector_data(m, model.dim());
        const auto sensing = select_rows(sensing_matrix(scene), model.active_set);
        const auto solved = gelma_mmv(sensing, data.data);
        ImageMap map;
        map.nx = scene.grid.nx;
        map.nz = scene.grid.nz;
        map.kind = MapKind::EffectiveSourceNorm;
        map.values = solved.sources.rowwise().norm();
        map.support = extract_support(map, model.dim());
        save_map(map, img_out, "mmv_sources");
        print_support("mmv support", map.support, scene.grid);
        std::cout << "gelma: " << solved.iterations << " iterations, residual " << solved.relative_residual << "\n";
      }
      return 0;
    }

    if (*reflect) {
      const auto scene = scene_from_json(load_json(ref_scene));
      const auto m = read_file<TimeReversalMatrix>(ref_matrix, [](std::istream& in) { return read_matrix_csv(in); });
      MusicParams params;
      params.signal_dim = dim_option(ref_dim, scene, false);
      const auto model = build_subspace_model(m, params);
      const auto data = singular_vector_data(m, model.dim());
      const auto sensing = select_rows(sensing_matrix(scene), model.active_set);
      std::vector<std::size_t> support;
      std::vector<Complex> values;
      if (ref_method == "lift") {
        support = music_map(model, scene, params).support;
        std::vector<RVector> intensities;
        for (Eigen::Index j = 0; j < data.data.cols(); ++j) intensities.push_back(data.data.col(j).cwiseAbs2());
        const auto problem = make_lifted_problem(sensing, data.illuminations, intensities, support);
        const auto lifted = nuclear_min_reflectivity(problem);
        const RVector amps = amplitudes_from_lift(lifted.lifted);
        for (Eigen::Index i = 0; i < amps.size(); ++i) values.emplace_back(amps(i), 0.0);
      } else {
        const auto solved = gelma_mmv(sensing, data.data);
        ImageMap norms;
        norms.nx = scene.grid.nx;
        norms.nz = scene.grid.nz;
        norms.values = solved.sources.rowwise().norm();
        support = extract_support(norms, model.dim());
        values = reflectivities_from_sources(solved.sources, data.illuminations, sensing, support).values;
      }
      save_map(amplitude_map(scene.grid.nx, scene.grid.nz, support, values), ref_out, "reflectivity");
      for (std::size_t i = 0; i < support.size(); ++i)
        std::cout << "(" << scene.grid.ix(support[i]) << "," << scene.grid.iz(support[i]) << ") |rho| = "
                  << std::abs(values[i]) << "\n";
      return 0;
    }

    if (*run) {
      if (run_preset.empty() == run_config.empty())
        throw CLI::ValidationError("run needs exactly one of <preset> or --config");
      auto scenario = run_config.empty() ? preset(run_preset) : scenario_from_json(load_json(run_config));
      if (run_seed) scenario.seed = *run_seed;
      const auto result = run_scenario(scenario);
      const auto dir = write_run(result, scenario, run_out.empty() ? default_output_root() : fs::path(run_out));
      std::cout << metrics_to_json(result.metrics).dump(2) << "\n";
      std::cout << "artifacts: " << dir.string() << "\n";
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const SolverError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
