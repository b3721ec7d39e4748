#include "phaseless/polarization.hpp"

#include "phaseless/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phaseless {

namespace {

void add_pair(IlluminationPlan& plan, std::size_t i, std::size_t j) {
  const auto n = plan.num_transducers;
  const std::size_t sum_at = plan.illuminations.size();
  plan.illuminations.push_back(illumination_basis(IlluminationKind::PairSum, n, i, j));
  plan.illuminations.push_back(illumination_basis(IlluminationKind::PairQuadrature, n, i, j));
  plan.pairs.emplace_back(i, j);
  plan.pair_index.emplace_back(sum_at, sum_at + 1);
}

void add_singles(IlluminationPlan& plan) {
  plan.single_index.assign(plan.num_transducers, IlluminationPlan::npos);
  for (auto i : plan.active_set) {
    plan.single_index[i] = plan.illuminations.size();
    plan.illuminations.push_back(illumination_basis(IlluminationKind::Single, plan.num_transducers, i));
  }
}

void add_all_pairs(IlluminationPlan& plan) {
  const auto& act = plan.active_set;
  for (std::size_t a = 0; a < act.size(); ++a)
    for (std::size_t b = a + 1; b < act.size(); ++b) add_pair(plan, act[a], act[b]);
}

}  // namespace

IlluminationPlan make_plan(PlanKind kind, std::size_t n, const PlanParams& params) {
  if (n == 0) throw std::invalid_argument("make_plan: empty array");
  IlluminationPlan plan;
  plan.kind = kind;
  plan.num_transducers = n;

  switch (kind) {
    case PlanKind::Full: {
      plan.active_set.resize(n);
      std::iota(plan.active_set.begin(), plan.active_set.end(), std::size_t{0});
      add_singles(plan);
      add_all_pairs(plan);
      break;
    }
    case PlanKind::Edges: {
      const auto e = params.edge_count;
      if (e < 1 || 2 * e > n)
        throw std::invalid_argument("make_plan: edge_count must lie in [1, N/2]");
      for (std::size_t i = 0; i < e; ++i) plan.active_set.push_back(i);
      for (std::size_t i = n - e; i < n; ++i) plan.active_set.push_back(i);
      add_singles(plan);
      add_all_pairs(plan);
      break;
    }
    case PlanKind::RandomPairs: {
      if (!(params.fraction > 0.0 && params.fraction <= 1.0))
        throw std::invalid_argument("make_plan: pair fraction must lie in (0, 1]");
      plan.active_set.resize(n);
      std::iota(plan.active_set.begin(), plan.active_set.end(), std::size_t{0});
      add_singles(plan);

      std::vector<std::pair<std::size_t, std::size_t>> all;
      all.reserve(n * (n - 1) / 2);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
      const auto keep = static_cast<std::size_t>(std::llround(params.fraction * static_cast<double>(all.size())));
      // Partial Fisher-Yates: the first `keep` slots become a uniform sample.
      RandomStream rng(params.seed, 0x70a1);
      for (std::size_t s = 0; s < keep; ++s) {
        const auto pick = s + static_cast<std::size_t>(rng.below(all.size() - s));
        std::swap(all[s], all[pick]);
      }
      all.resize(keep);
      std::sort(all.begin(), all.end());
      for (const auto& [i, j] : all) add_pair(plan, i, j);
      break;
    }
  }
  return plan;
}

IlluminationPlan plan_from_pairs(PlanKind kind, std::size_t n, std::vector<std::size_t> active_set,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  if (n == 0) throw std::invalid_argument("plan_from_pairs: empty array");
  IlluminationPlan plan;
  plan.kind = kind;
  plan.num_transducers = n;
  plan.active_set = std::move(active_set);
  std::vector<bool> active(n, false);
  for (auto i : plan.active_set) {
    if (i >= n || active[i]) throw std::invalid_argument("plan_from_pairs: bad active set");
    active[i] = true;
  }
  add_singles(plan);
  for (const auto& [i, j] : pairs) {
    if (!(i < j) || j >= n || !active[i] || !active[j])
      throw std::invalid_argument("plan_from_pairs: pair outside the active set");
    add_pair(plan, i, j);
  }
  return plan;
}

std::vector<double> acquire(const PhaselessInstrument& instrument, const IlluminationPlan& plan) {
  if (instrument.num_transducers() != plan.num_transducers)
    throw std::invalid_argument("acquire: plan and instrument disagree on array size");
  std::vector<double> powers(plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k)
    powers[k] = instrument.measure_total_power(plan.illuminations[k], k);
  return powers;
}

CMatrix TimeReversalMatrix::active_submatrix() const {
  const auto a = static_cast<Eigen::Index>(active_set.size());
  CMatrix sub(a, a);
  for (Eigen::Index r = 0; r < a; ++r)
    for (Eigen::Index c = 0; c < a; ++c)
      sub(r, c) = values(static_cast<Eigen::Index>(active_set[static_cast<std::size_t>(r)]),
                         static_cast<Eigen::Index>(active_set[static_cast<std::size_t>(c)]));
  return sub;
}

TimeReversalMatrix TimeReversalMatrix::from_full(CMatrix m) {
  TimeReversalMatrix out;
  const auto n = m.rows();
  out.values = std::move(m);
  out.known.setConstant(n, n, true);
  out.active_set.resize(static_cast<std::size_t>(n));
  std::iota(out.active_set.begin(), out.active_set.end(), std::size_t{0});
  return out;
}

TimeReversalMatrix recover_time_reversal(std::span<const double> powers, const IlluminationPlan& plan) {
  if (powers.size() != plan.size())
    throw std::invalid_argument("recover_time_reversal: expected " + std::to_string(plan.size()) +
                                " power measurements, got " + std::to_string(powers.size()));
  const auto n = static_cast<Eigen::Index>(plan.num_transducers);
  TimeReversalMatrix m;
  m.values = CMatrix::Zero(n, n);
  m.known.setConstant(n, n, false);
  m.active_set = plan.active_set;

  for (auto i : plan.active_set) {
    const auto at = plan.single_index[i];
    if (at == IlluminationPlan::npos)
      throw std::invalid_argument("recover_time_reversal: missing single illumination");
    const auto ii = static_cast<Eigen::Index>(i);
    m.values(ii, ii) = powers[at];
    m.known(ii, ii) = true;
  }
  for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
    const auto [i, j] = plan.pairs[p];
    const auto [sum_at, quad_at] = plan.pair_index[p];
    const auto si = plan.single_index[i];
    const auto sj = plan.single_index[j];
    if (si == IlluminationPlan::npos || sj == IlluminationPlan::npos)
      throw std::invalid_argument("recover_time_reversal: pair without its single illuminations");
    const double base = powers[si] + powers[sj];
    const Complex mij{0.5 * (powers[sum_at] - base), 0.5 * (powers[quad_at] - base)};
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    m.values(ii, jj) = mij;
    m.values(jj, ii) = std::conj(mij);
    m.known(ii, jj) = m.known(jj, ii) = true;
  }
  return m;
}

TimeReversalMatrix hermitian_symmetrize(TimeReversalMatrix m) {
  if ((m.known != m.known.transpose()).any())
    throw std::invalid_argument("hermitian_symmetrize: known-entry mask is not symmetric");
  const CMatrix avg = 0.5 * (m.values + m.values.adjoint());
  m.values = m.known.select(avg, CMatrix::Zero(m.values.rows(), m.values.cols()));
  return m;
}

}  // namespace phaseless
