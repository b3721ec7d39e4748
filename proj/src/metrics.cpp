#include "phaseless/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace phaseless {

using nlohmann::json;

const PipelineMetrics* Metrics::find(const std::string& name) const {
  for (const auto& p : pipelines)
    if (p.name == name) return &p;
  return nullptr;
}

bool Metrics::support_exact() const {
  return !pipelines.empty() &&
         std::all_of(pipelines.begin(), pipelines.end(), [](const auto& p) { return p.support_exact; });
}

PipelineMetrics compute_metrics(const SceneConfig& truth, const PipelineResult& result) {
  const auto& grid = truth.grid;
  const auto& est = result.support;
  const auto& tru = truth.scatterers;

  PipelineMetrics m;
  m.name = result.name;
  m.support = est;

  std::set<std::size_t> est_set(est.begin(), est.end()), true_set;
  for (const auto& s : tru) true_set.insert(s.grid_index);
  m.support_exact = est_set == true_set;

  auto cells = [&](std::size_t a, std::size_t b) {
    const double dx = static_cast<double>(grid.ix(a)) - static_cast<double>(grid.ix(b));
    const double dz = static_cast<double>(grid.iz(a)) - static_cast<double>(grid.iz(b));
    return std::hypot(dx, dz);
  };
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t e = 0; e < est.size(); ++e)
    for (std::size_t t = 0; t < tru.size(); ++t) candidates.emplace_back(cells(est[e], tru[t].grid_index), e, t);
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> est_used(est.size(), false), true_used(tru.size(), false);
  std::vector<std::size_t> match(tru.size(), est.size());
  for (const auto& [d, e, t] : candidates) {
    if (est_used[e] || true_used[t]) continue;
    est_used[e] = true_used[t] = true;
    match[t] = e;
    m.support_distance += d;
  }
  const auto unmatched = static_cast<double>(std::count(est_used.begin(), est_used.end(), false) +
                                             std::count(true_used.begin(), true_used.end(), false));
  m.support_distance += unmatched * grid.diameter_cells();

  if (!result.reflectivities.empty()) {
    double worst = 0.0;
    for (std::size_t t = 0; t < tru.size(); ++t) {
      const double ref = std::abs(tru[t].reflectivity);
      double err = 1.0;
      if (match[t] < est.size() && match[t] < result.reflectivities.size())
        err = std::abs(std::abs(result.reflectivities[match[t]]) - ref) / ref;
      m.reflectivity_errors.push_back(err);
      worst = std::max(worst, err);
    }
    m.max_reflectivity_error = worst;
  }
  return m;
}

json metrics_to_json(const Metrics& m) {
  json j;
  j["matrix_recovery_error"] = m.matrix_recovery_error ? json(*m.matrix_recovery_error) : json(nullptr);
  j["support_exact"] = m.support_exact();
  j["pipelines"] = json::array();
  for (const auto& p : m.pipelines) {
    json q;
    q["name"] = p.name;
    q["support"] = p.support;
    q["support_exact"] = p.support_exact;
    q["support_distance"] = p.support_distance;
    q["reflectivity_relative_error"] = p.reflectivity_errors;
    q["max_reflectivity_relative_error"] = p.max_reflectivity_error ? json(*p.max_reflectivity_error) : json(nullptr);
    j["pipelines"].push_back(q);
  }
  j["warnings"] = m.warnings;
  return j;
}

json runtimes_to_json(const Metrics& m) {
  json j = json::array();
  for (const auto& r : m.runtimes) j.push_back({{"stage", r.stage}, {"seconds", r.seconds}});
  return j;
}

}  // namespace phaseless
