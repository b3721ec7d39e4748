#include "oracles.hpp"

#include "phaseless/forward_model.hpp"

#include <doctest.h>

#include <numbers>

using namespace phaseless;

TEST_CASE("green: unit distance and half wavelength") {
  const double k = 2.0 * std::numbers::pi;
  const auto g1 = green({0, 0}, {0, 1}, k);
  CHECK(g1.real() == doctest::Approx(0.0795775).epsilon(1e-6));
  CHECK(std::abs(g1.imag()) < 1e-15);
  const auto g2 = green({0, 0}, {0.3, 0.4}, k);
  CHECK(g2.real() == doctest::Approx(-0.1591549).epsilon(1e-6));
  CHECK(std::abs(g2.imag()) < 1e-15);
}

TEST_CASE("green: coincident points are rejected") {
  CHECK_THROWS_AS(green({1, 2}, {1, 2}, 1.0), SingularEvaluation);
}

TEST_CASE("green is reciprocal") {
  const Point2 a{-3.2, 0.0}, b{4.1, 97.5};
  CHECK(std::abs(green(a, b, 5.0) - green(b, a, 5.0)) == 0.0);
}

TEST_CASE("green_vector: single transducer") {
  LinearArrayLayout l;
  l.num_transducers = 1;
  const auto scene = make_linear_array_scene(l);
  const Point2 y{2.0, 95.0};
  const auto g = green_vector(y, scene);
  REQUIRE(g.size() == 1);
  CHECK(std::abs(g(0) - green(scene.transducers[0], y, scene.wavenumber())) == 0.0);
}

TEST_CASE("green_vector: squared norm is the scalar sum of 1/(4 pi r)^2") {
  const auto scene = make_linear_array_scene({});
  const Point2 y{3.5, 104.5};
  double expected = 0.0;
  for (const auto& x : scene.transducers) {
    const double r = oracle::dist(x, y);
    expected += 1.0 / ((4 * std::numbers::pi * r) * (4 * std::numbers::pi * r));
  }
  CHECK(green_vector(y, scene).squaredNorm() == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("green_vector: point on the bisector gives a palindrome") {
  const auto scene = make_linear_array_scene({});
  const auto g = green_vector({0.0, 87.0}, scene);
  const auto n = g.size();
  for (Eigen::Index s = 0; s < n; ++s) CHECK(std::abs(g(s) - g(n - 1 - s)) <= 1e-15 * std::abs(g(s)));
}

TEST_CASE("sensing_matrix: shape, columns and distinctness") {
  const auto scene = make_linear_array_scene({});
  const auto g = sensing_matrix(scene);
  CHECK(g.rows() == 100);
  CHECK(g.cols() == 900);
  const auto ref = oracle::sensing(scene);
  CHECK((g - ref).norm() <= 1e-13 * ref.norm());
  for (Eigen::Index j = 1; j < g.cols(); j += 37) CHECK((g.col(j) - g.col(j - 1)).norm() > 0.0);

  LinearArrayLayout one;
  one.nx = 1;
  one.nz = 1;
  const auto s1 = make_linear_array_scene(one);
  CHECK((sensing_matrix(s1).col(0) - green_vector(s1.grid.point(0), s1)).norm() == 0.0);
}

TEST_CASE("response_matrix: zero reflectivity, rank one, double-sum oracle") {
  auto scene = oracle::random_scene(5, 3, 11, 10, 10);
  for (auto& s : scene.scatterers) s.reflectivity = 0.0;
  CHECK(response_matrix(scene).norm() == 0.0);

  scene = oracle::random_scene(8, 1, 12, 10, 10);
  const auto y = scene.grid.point(scene.scatterers[0].grid_index);
  const CVector g = green_vector(y, scene);
  const CMatrix outer = scene.scatterers[0].reflectivity * g * g.transpose();
  const CMatrix p1 = response_matrix(scene);
  CHECK((p1 - outer).norm() <= 1e-14 * outer.norm());
  Eigen::JacobiSVD<CMatrix> svd(p1);
  CHECK(svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0));

  scene = oracle::random_scene(5, 3, 13, 10, 10);
  const CMatrix p = response_matrix(scene);
  const CMatrix ref = oracle::response(scene);
  CHECK((p - ref).norm() <= 1e-12 * ref.norm());
  CHECK((p - p.transpose()).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("response_matrix equals G diag(rho) G^T") {
  const auto scene = oracle::random_scene(20, 4, 14, 12, 12);
  const CMatrix g = sensing_matrix(scene);
  const CMatrix p = g * reflectivity_vector(scene).asDiagonal() * g.transpose();
  CHECK((response_matrix(scene) - p).norm() <= 1e-12 * p.norm());
}

TEST_CASE("scene validation") {
  CHECK_THROWS_AS(make_linear_array_scene({}, {{5, 1.0}, {5, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_linear_array_scene({}, {{900, 1.0}}), std::invalid_argument);
  auto scene = make_linear_array_scene({}, {{899, 1.0}});
  CHECK_NOTHROW(scene.validate());
  scene.scatterers.push_back({899, 2.0});
  CHECK_THROWS_AS(scene.validate(), std::invalid_argument);
  LinearArrayLayout empty;
  empty.num_transducers = 0;
  CHECK_THROWS_AS(make_linear_array_scene(empty).validate(), std::invalid_argument);
}

TEST_CASE("grid geometry") {
  const auto scene = make_linear_array_scene({});
  CHECK(scene.transducers.front().x == doctest::Approx(-49.5));
  CHECK(scene.transducers.back().x == doctest::Approx(49.5));
  const auto& g = scene.grid;
  CHECK(g.point(g.index(0, 0)).z == doctest::Approx(85.5));
  CHECK(g.point(g.index(29, 29)).x == doctest::Approx(14.5));
  CHECK(g.ix(g.index(7, 3)) == 7);
  CHECK(g.iz(g.index(7, 3)) == 3);
  CHECK(g.diameter_cells() == doctest::Approx(29.0 * std::sqrt(2.0)));
}
