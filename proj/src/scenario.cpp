#include "phaseless/scenario.hpp"

#include "phaseless/matrix_io.hpp"
#include "phaseless/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace phaseless {

using nlohmann::json;

namespace {

constexpr std::uint64_t kScattererStream = 0x5ca7;

Scenario base(std::string name, std::size_t count, double noise) {
  Scenario s;
  s.name = std::move(name);
  s.random = RandomScatterers{};
  s.random->count = count;
  s.noise = noise;
  if (noise > 0.0) {
    // Under noise the residual never reaches the tolerance; a fixed budget
    // stops before the small spurious rows grow.
    s.gelma.max_iters = 3000;
  }
  return s;
}

Scenario edges(std::string name, std::size_t per_edge, double noise, Pipeline pipeline) {
  auto s = base(std::move(name), 6, noise);
  s.plan = PlanKind::Edges;
  s.plan_params.edge_count = per_edge;
  s.pipeline = pipeline;
  s.lift = false;
  return s;
}

const std::map<std::string, std::function<Scenario()>>& registry() {
  static const auto table = [] {
    std::map<std::string, std::function<Scenario()>> t;
    t["fig1a"] = [] { return base("fig1a", 5, 0.0); };
    t["fig1b"] = [] { return base("fig1b", 9, 0.0); };
    t["fig2"] = [] { return base("fig2", 5, 0.10); };
    t["fig3"] = [] { return base("fig3", 5, 0.20); };
    t["fig4"] = [] {
      auto s = base("fig4", 5, 0.05);
      s.plan = PlanKind::RandomPairs;
      s.plan_params.fraction = 0.5;
      return s;
    };
    for (std::size_t e : {4, 16, 28}) {
      const auto n = "fig6_edges" + std::to_string(e);
      t[n] = [n, e] { return edges(n, e, 0.0, Pipeline::Both); };
    }
    for (std::size_t e = 4; e <= 24; e += 4) {
      const auto n = "fig7_edges" + std::to_string(e);
      t[n] = [n, e] { return edges(n, e, 0.05, Pipeline::Music); };
    }
    for (int pct : {10, 20})
      for (std::size_t e : {4, 12, 24}) {
        const auto n = "fig8_eps" + std::to_string(pct) + "_edges" + std::to_string(e);
        t[n] = [n, e, pct] { return edges(n, e, pct / 100.0, Pipeline::Music); };
      }
    // Descriptive aliases.
    t["fig1_5scatterers"] = [] { auto s = base("fig1_5scatterers", 5, 0.0); return s; };
    t["fig1_9scatterers"] = [] { auto s = base("fig1_9scatterers", 9, 0.0); return s; };
    t["fig4_completion"] = [] {
      auto s = base("fig4_completion", 5, 0.05);
      s.plan = PlanKind::RandomPairs;
      s.plan_params.fraction = 0.5;
      return s;
    };
    return t;
  }();
  return table;
}

template <class E>
E parse_enum(const std::string& v, std::initializer_list<std::pair<const char*, E>> options, const char* what) {
  for (const auto& [name, e] : options)
    if (v == name) return e;
  throw std::invalid_argument(std::string("unknown ") + what + " \"" + v + "\"");
}

const char* pairing_name(ProjectionPairing p) { return p == ProjectionPairing::Conjugate ? "conjugate" : "bilinear"; }
const char* averaging_name(SourceAveraging a) { return a == SourceAveraging::Uniform ? "uniform" : "field-weighted"; }
const char* lift_mode_name(LiftMode m) { return m == LiftMode::SoftThreshold ? "soft-threshold" : "rank-one"; }

template <class T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::Music: return "music";
    case Pipeline::Mmv: return "mmv";
    case Pipeline::Both: return "both";
  }
  return "both";
}

std::string to_string(SignalDimMode m) {
  switch (m) {
    case SignalDimMode::Known: return "known";
    case SignalDimMode::Estimate: return "estimate";
    case SignalDimMode::Fixed: return "fixed";
  }
  return "known";
}

void Scenario::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario: empty name");
  if (!(noise >= 0.0 && noise < 1.0)) throw std::invalid_argument("scenario: noise must lie in [0, 1)");
  if (random) {
    if (random->count == 0) throw std::invalid_argument("scenario: random scatterer count must be positive");
    if (!(random->min_magnitude > 0.0 && random->max_magnitude >= random->min_magnitude))
      throw std::invalid_argument("scenario: bad magnitude range");
  } else if (scatterers.empty()) {
    throw std::invalid_argument("scenario: no scatterers");
  }
  if (signal_dim == SignalDimMode::Fixed && fixed_dim == 0)
    throw std::invalid_argument("scenario: fixed signal dimension must be positive");
}

std::vector<Scatterer> draw_scatterers(const ImageGrid& grid, const RandomScatterers& spec, std::uint64_t seed) {
  if (spec.count > grid.size()) throw std::invalid_argument("draw_scatterers: more scatterers than pixels");
  RandomStream rng(seed, kScattererStream);
  std::vector<Scatterer> out;
  std::size_t attempts = 0;
  while (out.size() < spec.count) {
    if (++attempts > 100000)
      throw std::runtime_error("draw_scatterers: cannot place scatterers with the requested separation");
    const auto k = static_cast<std::size_t>(rng.below(grid.size()));
    const auto p = grid.point(k);
    const bool clash = std::any_of(out.begin(), out.end(), [&](const Scatterer& s) {
      return s.grid_index == k || distance(grid.point(s.grid_index), p) < spec.min_separation;
    });
    if (clash) continue;
    const double mag = rng.uniform(spec.min_magnitude, spec.max_magnitude);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.push_back({k, std::polar(mag, phase)});
  }
  return out;
}

SceneConfig build_scene(const Scenario& s) {
  auto scene = make_linear_array_scene(s.layout);
  scene.scatterers = s.random ? draw_scatterers(scene.grid, *s.random, s.seed) : s.scatterers;
  scene.validate();
  return scene;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [n, f] : registry()) names.push_back(n);
  return names;
}

bool has_preset(const std::string& name) { return registry().count(name) != 0; }

Scenario preset(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown preset \"" + name + "\"");
  return it->second();
}

json scene_to_json(const SceneConfig& scene, const LinearArrayLayout& layout) {
  json j;
  j["transducers"] = layout.num_transducers;
  j["transducer_spacing"] = layout.transducer_spacing;
  j["range"] = layout.range;
  j["nx"] = layout.nx;
  j["ny"] = layout.nz;
  j["pixel_spacing"] = layout.pixel_spacing;
  j["scatterers"] = json::array();
  for (const auto& s : scene.scatterers)
    j["scatterers"].push_back({{"ix", scene.grid.ix(s.grid_index)},
                               {"iy", scene.grid.iz(s.grid_index)},
                               {"re", s.reflectivity.real()},
                               {"im", s.reflectivity.imag()}});
  return j;
}

namespace {

LinearArrayLayout layout_from_json(const json& j, LinearArrayLayout l) {
  read_if(j, "transducers", l.num_transducers);
  read_if(j, "transducer_spacing", l.transducer_spacing);
  read_if(j, "range", l.range);
  read_if(j, "nx", l.nx);
  read_if(j, "ny", l.nz);
  read_if(j, "pixel_spacing", l.pixel_spacing);
  return l;
}

std::vector<Scatterer> scatterers_from_json(const json& arr, const LinearArrayLayout& l) {
  std::vector<Scatterer> out;
  for (const auto& s : arr) {
    const auto ix = s.at("ix").get<std::size_t>();
    const auto iy = s.at("iy").get<std::size_t>();
    if (ix >= l.nx || iy >= l.nz) throw std::invalid_argument("scene: scatterer outside the image window");
    out.push_back({iy * l.nx + ix, Complex{s.at("re").get<double>(), s.value("im", 0.0)}});
  }
  return out;
}

}  // namespace

SceneConfig scene_from_json(const json& j, LinearArrayLayout* layout) {
  const auto l = layout_from_json(j, LinearArrayLayout{});
  if (layout) *layout = l;
  auto scene = make_linear_array_scene(l, scatterers_from_json(j.value("scatterers", json::array()), l));
  scene.validate();
  return scene;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["seed"] = s.seed;
  auto scene = make_linear_array_scene(s.layout, s.random ? std::vector<Scatterer>{} : s.scatterers);
  j["scene"] = scene_to_json(scene, s.layout);
  if (s.random)
    j["random_scatterers"] = {{"count", s.random->count},
                              {"min_magnitude", s.random->min_magnitude},
                              {"max_magnitude", s.random->max_magnitude},
                              {"min_separation", s.random->min_separation}};
  j["plan"] = {{"kind", plan_kind_name(s.plan)},
               {"fraction", s.plan_params.fraction},
               {"edge_count", s.plan_params.edge_count}};
  j["noise"] = s.noise;
  j["pipeline"] = to_string(s.pipeline);
  j["signal_dim"] = s.signal_dim == SignalDimMode::Fixed ? json(s.fixed_dim) : json(to_string(s.signal_dim));
  j["music"] = {{"eta", s.music.eta}, {"pairing", pairing_name(s.music.pairing)},
                {"projection_floor", s.music.projection_floor}};
  j["gelma"] = {{"step", s.gelma.step},         {"regularization", s.gelma.regularization},
                {"max_iters", s.gelma.max_iters}, {"tolerance", s.gelma.tolerance},
                {"check_every", s.gelma.check_every}, {"patience", s.gelma.patience},
                {"record_trace", s.gelma.record_trace}};
  j["completion"] = {{"enabled", s.complete},         {"threshold", s.completion.threshold},
                     {"step", s.completion.step},       {"max_iters", s.completion.max_iters},
                     {"tolerance", s.completion.tolerance}, {"patience", s.completion.patience}};
  j["reflectivity"] = {{"source_threshold", s.source_threshold}, {"averaging", averaging_name(s.averaging)}};
  j["lift"] = {{"enabled", s.lift},
               {"mode", lift_mode_name(s.lift_params.mode)},
               {"step", s.lift_params.step},
               {"threshold", s.lift_params.threshold},
               {"max_iters", s.lift_params.max_iters},
               {"tolerance", s.lift_params.tolerance}};
  return j;
}

Scenario scenario_from_json(const json& j) {
  Scenario s;
  if (j.contains("preset")) s = preset(j.at("preset").get<std::string>());
  read_if(j, "name", s.name);
  read_if(j, "seed", s.seed);
  if (j.contains("scene")) {
    const auto& sc = j.at("scene");
    s.layout = layout_from_json(sc, s.layout);
    if (sc.contains("scatterers") && !sc.at("scatterers").empty()) {
      s.scatterers = scatterers_from_json(sc.at("scatterers"), s.layout);
      s.random.reset();
    }
  }
  if (j.contains("random_scatterers")) {
    const auto& r = j.at("random_scatterers");
    RandomScatterers spec = s.random.value_or(RandomScatterers{});
    read_if(r, "count", spec.count);
    read_if(r, "min_magnitude", spec.min_magnitude);
    read_if(r, "max_magnitude", spec.max_magnitude);
    read_if(r, "min_separation", spec.min_separation);
    s.random = spec;
    s.scatterers.clear();
  }
  if (j.contains("plan")) {
    const auto& p = j.at("plan");
    if (p.contains("kind")) s.plan = parse_plan_kind(p.at("kind").get<std::string>());
    read_if(p, "fraction", s.plan_params.fraction);
    read_if(p, "edge_count", s.plan_params.edge_count);
  }
  read_if(j, "noise", s.noise);
  if (j.contains("pipeline"))
    s.pipeline = parse_enum<Pipeline>(j.at("pipeline").get<std::string>(),
                                      {{"music", Pipeline::Music}, {"mmv", Pipeline::Mmv}, {"both", Pipeline::Both}},
                                      "pipeline");
  if (j.contains("signal_dim")) {
    const auto& d = j.at("signal_dim");
    if (d.is_number_unsigned() || d.is_number_integer()) {
      s.signal_dim = SignalDimMode::Fixed;
      s.fixed_dim = d.get<std::size_t>();
    } else {
      s.signal_dim = parse_enum<SignalDimMode>(d.get<std::string>(),
                                               {{"known", SignalDimMode::Known}, {"estimate", SignalDimMode::Estimate}},
                                               "signal_dim");
    }
  }
  if (j.contains("music")) {
    const auto& m = j.at("music");
    read_if(m, "eta", s.music.eta);
    read_if(m, "projection_floor", s.music.projection_floor);
    if (m.contains("pairing"))
      s.music.pairing = parse_enum<ProjectionPairing>(
          m.at("pairing").get<std::string>(),
          {{"conjugate", ProjectionPairing::Conjugate}, {"bilinear", ProjectionPairing::Bilinear}}, "pairing");
  }
  if (j.contains("gelma")) {
    const auto& g = j.at("gelma");
    read_if(g, "step", s.gelma.step);
    read_if(g, "regularization", s.gelma.regularization);
    read_if(g, "max_iters", s.gelma.max_iters);
    read_if(g, "tolerance", s.gelma.tolerance);
    read_if(g, "check_every", s.gelma.check_every);
    read_if(g, "patience", s.gelma.patience);
    read_if(g, "record_trace", s.gelma.record_trace);
  }
  if (j.contains("completion")) {
    const auto& c = j.at("completion");
    read_if(c, "enabled", s.complete);
    read_if(c, "threshold", s.completion.threshold);
    read_if(c, "step", s.completion.step);
    read_if(c, "max_iters", s.completion.max_iters);
    read_if(c, "tolerance", s.completion.tolerance);
    read_if(c, "patience", s.completion.patience);
  }
  if (j.contains("reflectivity")) {
    const auto& r = j.at("reflectivity");
    read_if(r, "source_threshold", s.source_threshold);
    if (r.contains("averaging"))
      s.averaging = parse_enum<SourceAveraging>(
          r.at("averaging").get<std::string>(),
          {{"uniform", SourceAveraging::Uniform}, {"field-weighted", SourceAveraging::FieldWeighted}}, "averaging");
  }
  if (j.contains("lift")) {
    const auto& l = j.at("lift");
    read_if(l, "enabled", s.lift);
    read_if(l, "step", s.lift_params.step);
    read_if(l, "threshold", s.lift_params.threshold);
    read_if(l, "max_iters", s.lift_params.max_iters);
    read_if(l, "tolerance", s.lift_params.tolerance);
    if (l.contains("mode"))
      s.lift_params.mode = parse_enum<LiftMode>(
          l.at("mode").get<std::string>(),
          {{"soft-threshold", LiftMode::SoftThreshold}, {"rank-one", LiftMode::RankOne}}, "lift mode");
  }
  s.validate();
  return s;
}

}  // namespace phaseless
