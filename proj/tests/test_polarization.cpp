#include "oracles.hpp"

#include "phaseless/polarization.hpp"

#include <doctest.h>

#include <set>

using namespace phaseless;

namespace {

TimeReversalMatrix recover_clean(const CMatrix& p, const IlluminationPlan& plan) {
  const PhaselessInstrument inst(p, 0.0, 1);
  const auto powers = acquire(inst, plan);
  return recover_time_reversal(powers, plan);
}

}  // namespace

TEST_CASE("make_plan: full plan for two transducers") {
  const auto plan = make_plan(PlanKind::Full, 2);
  REQUIRE(plan.size() == 4);
  CHECK(plan.illuminations[0].tag() == "e0");
  CHECK(plan.illuminations[1].tag() == "e1");
  CHECK(plan.illuminations[2].tag() == "e0+e1");
  CHECK(plan.illuminations[3].tag() == "e0-ie1");
}

TEST_CASE("make_plan: full plan has N^2 illuminations") {
  for (std::size_t n : {1, 3, 10, 100}) CHECK(make_plan(PlanKind::Full, n).size() == n * n);
}

TEST_CASE("make_plan: random pairs keep half the pairs and every diagonal") {
  PlanParams params;
  params.fraction = 0.5;
  params.seed = 3;
  const auto plan = make_plan(PlanKind::RandomPairs, 100, params);
  CHECK(plan.pairs.size() == 2475);
  CHECK(plan.size() == 100 + 2 * 2475);
  std::set<std::pair<std::size_t, std::size_t>> uniq(plan.pairs.begin(), plan.pairs.end());
  CHECK(uniq.size() == plan.pairs.size());
  for (std::size_t i = 0; i < 100; ++i) CHECK(plan.single_index[i] != IlluminationPlan::npos);
  const auto again = make_plan(PlanKind::RandomPairs, 100, params);
  CHECK(again.pairs == plan.pairs);
  params.seed = 4;
  CHECK(make_plan(PlanKind::RandomPairs, 100, params).pairs != plan.pairs);
}

TEST_CASE("make_plan: edges") {
  PlanParams params;
  params.edge_count = 4;
  const auto plan = make_plan(PlanKind::Edges, 100, params);
  CHECK(plan.active_set == std::vector<std::size_t>{0, 1, 2, 3, 96, 97, 98, 99});
  CHECK(plan.size() == 64);
  params.edge_count = 0;
  CHECK_THROWS_AS(make_plan(PlanKind::Edges, 100, params), std::invalid_argument);
  params.edge_count = 51;
  CHECK_THROWS_AS(make_plan(PlanKind::Edges, 100, params), std::invalid_argument);
}

TEST_CASE("make_plan: every pair has its four prerequisite measurements") {
  PlanParams params;
  params.fraction = 0.3;
  const auto plan = make_plan(PlanKind::RandomPairs, 20, params);
  for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
    const auto [i, j] = plan.pairs[p];
    const auto [s, q] = plan.pair_index[p];
    CHECK(plan.illuminations[s].kind == IlluminationKind::PairSum);
    CHECK(plan.illuminations[q].kind == IlluminationKind::PairQuadrature);
    CHECK(plan.illuminations[s].first == i);
    CHECK(plan.illuminations[q].second == j);
    CHECK(plan.single_index[i] != IlluminationPlan::npos);
    CHECK(plan.single_index[j] != IlluminationPlan::npos);
  }
  CHECK_THROWS_AS(make_plan(PlanKind::RandomPairs, 20, PlanParams{0.0, 0, 0}), std::invalid_argument);
}

TEST_CASE("recover_time_reversal: exact on a random scene") {
  const auto scene = oracle::random_scene(30, 4, 21, 12, 12);
  const CMatrix p = oracle::response(scene);
  const CMatrix m = p.adjoint() * p;
  const auto rec = recover_clean(p, make_plan(PlanKind::Full, 30));
  CHECK(rec.fully_known());
  CHECK((rec.values - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("recover_time_reversal: single transducer and zero scene") {
  CMatrix p(1, 1);
  p(0, 0) = Complex{0.3, -1.2};
  const auto rec = recover_clean(p, make_plan(PlanKind::Full, 1));
  CHECK(rec.values(0, 0).real() == doctest::Approx(std::norm(p(0, 0))).epsilon(1e-15));

  const auto zero = recover_clean(CMatrix::Zero(6, 6), make_plan(PlanKind::Full, 6));
  CHECK(zero.values.norm() == 0.0);
}

TEST_CASE("recover_time_reversal: linear in the powers") {
  const auto plan = make_plan(PlanKind::Full, 8);
  const CMatrix p = oracle::random_matrix(8, 8, 22);
  const PhaselessInstrument inst(p, 0.0, 1);
  auto powers = acquire(inst, plan);
  const auto base = recover_time_reversal(powers, plan);
  for (auto& v : powers) v *= 3.5;
  const auto scaled = recover_time_reversal(powers, plan);
  CHECK((scaled.values - 3.5 * base.values).norm() <= 1e-13 * scaled.values.norm());
}

TEST_CASE("recover_time_reversal: wrong number of powers") {
  const auto plan = make_plan(PlanKind::Full, 4);
  std::vector<double> powers(plan.size() - 1, 1.0);
  CHECK_THROWS_AS(recover_time_reversal(powers, plan), std::invalid_argument);
}

TEST_CASE("edge plans know exactly the corner blocks") {
  const CMatrix p = oracle::random_matrix(20, 20, 23);
  PlanParams params;
  params.edge_count = 3;
  const auto plan = make_plan(PlanKind::Edges, 20, params);
  const auto rec = recover_clean(p, plan);
  const std::set<std::size_t> active(plan.active_set.begin(), plan.active_set.end());
  const CMatrix m = p.adjoint() * p;
  for (Eigen::Index i = 0; i < 20; ++i)
    for (Eigen::Index j = 0; j < 20; ++j) {
      const bool expect = active.count(std::size_t(i)) && active.count(std::size_t(j));
      CHECK(rec.known(i, j) == expect);
      if (expect) CHECK(std::abs(rec.values(i, j) - m(i, j)) <= 1e-12 * m.norm());
    }
  CHECK(rec.active_submatrix().rows() == 6);
  CHECK(rec.known_count() == 36);
}

TEST_CASE("hermitian_symmetrize") {
  const CMatrix a = oracle::random_matrix(5, 5, 24);
  const CMatrix h = a + a.adjoint();
  auto m = TimeReversalMatrix::from_full(h);
  CHECK((hermitian_symmetrize(m).values - h).norm() <= 1e-15 * h.norm());

  m.values(2, 2) += Complex{0.0, 1e-3};
  const auto out = hermitian_symmetrize(m);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(out.values(i, i).imag() == 0.0);

  const auto scene = oracle::random_scene(20, 3, 25, 10, 10);
  const CMatrix p = oracle::response(scene);
  const auto plan = make_plan(PlanKind::Full, 20);
  const PhaselessInstrument inst(p, 0.1, 9);
  const auto raw = recover_time_reversal(acquire(inst, plan), plan);
  const auto sym = hermitian_symmetrize(raw);
  CHECK((sym.values - sym.values.adjoint()).norm() == 0.0);
  const CMatrix truth = p.adjoint() * p;
  CHECK((sym.values - raw.values).norm() <= (raw.values - truth).norm());

  auto bad = TimeReversalMatrix::from_full(h);
  bad.known(0, 1) = false;
  CHECK_THROWS_AS(hermitian_symmetrize(bad), std::invalid_argument);
}

TEST_CASE("plan_from_pairs reproduces make_plan") {
  PlanParams params;
  params.fraction = 0.4;
  params.seed = 8;
  const auto plan = make_plan(PlanKind::RandomPairs, 12, params);
  const auto rebuilt = plan_from_pairs(plan.kind, 12, plan.active_set, plan.pairs);
  REQUIRE(rebuilt.size() == plan.size());
  for (std::size_t k = 0; k < plan.size(); ++k) CHECK(rebuilt.illuminations[k].tag() == plan.illuminations[k].tag());
  CHECK_THROWS_AS(plan_from_pairs(PlanKind::Full, 4, {0, 1}, {{0, 3}}), std::invalid_argument);
}
