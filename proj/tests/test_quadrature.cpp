#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutrom/errors.hpp"
#include "cutrom/quadrature.hpp"
#include "cutrom/rng.hpp"

using namespace cutrom;

namespace {
const TriPoints unit_tri{Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                         Eigen::Vector2d(0, 1)};

double integrate(const QuadratureRule& r,
                 const std::function<double(const Eigen::Vector2d&)>& f) {
  double s = 0;
  for (size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * f(r.points[i]);
  return s;
}

double tri_area(const TriPoints& t) {
  return 0.5 * std::abs((t[1] - t[0]).x() * (t[2] - t[0]).y() -
                        (t[1] - t[0]).y() * (t[2] - t[0]).x());
}
}  // namespace

TEST_CASE("uncut negative triangle integrates its full area") {
  const QuadratureRule r = cut_bulk_rule(unit_tri, {-1, -1, -1}, 2);
  CHECK(r.weight_sum() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.normals.empty());
}

TEST_CASE("uncut positive triangle yields an empty rule") {
  const QuadratureRule r = cut_bulk_rule(unit_tri, {1, 1, 1}, 2);
  CHECK(r.points.empty());
  CHECK(r.weight_sum() == 0);
}

TEST_CASE("one positive corner removes a quarter of the unit triangle") {
  // chord cuts the v1 corner at the two edge midpoints
  const QuadratureRule r = cut_bulk_rule(unit_tri, {-0.5, 0.5, -0.5}, 2);
  CHECK(r.weight_sum() == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("interface chord of the midpoint cut has length 0.5 and normal +x") {
  const QuadratureRule r = interface_rule(unit_tri, {-0.5, 0.5, -0.5}, 2);
  CHECK(r.weight_sum() == doctest::Approx(0.5).epsilon(1e-14));
  REQUIRE(r.normals.size() == r.points.size());
  for (const auto& n : r.normals) {
    CHECK(n.x() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.y() == doctest::Approx(0.0).epsilon(1e-14));
  }
  // chord endpoints are (0.5, 0) and (0.5, 0.5): all points sit on x = 0.5
  for (const auto& p : r.points) {
    CHECK(p.x() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.y() >= 0.0);
    CHECK(p.y() <= 0.5);
  }
}

TEST_CASE("interface normal points toward positive phi") {
  Xoshiro256ss rng(17);
  for (int i = 0; i < 100; ++i) {
    TriValues phi{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const bool has_cut = (phi[0] < 0 || phi[1] < 0 || phi[2] < 0) &&
                         (phi[0] > 0 || phi[1] > 0 || phi[2] > 0);
    if (!has_cut) continue;
    const QuadratureRule r = interface_rule(unit_tri, phi, 2);
    REQUIRE(!r.points.empty());
    // gradient of the linear interpolant of phi on the unit triangle
    const Eigen::Vector2d grad(phi[1] - phi[0], phi[2] - phi[0]);
    for (const auto& n : r.normals) {
      CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(n.dot(grad.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("interface rule on an uncut cell raises the no-interface error") {
  CHECK_THROWS_AS(interface_rule(unit_tri, {-1, -1, -1}, 2), NoInterfaceError);
  CHECK_THROWS_AS(interface_rule(unit_tri, {1, 2, 3}, 2), NoInterfaceError);
}

TEST_CASE("cut and complement partition the triangle area") {
  Xoshiro256ss rng(31);
  for (int i = 0; i < 200; ++i) {
    TriPoints tri;
    for (auto& p : tri) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (tri_area(tri) < 1e-3) continue;
    // keep the counterclockwise orientation the mesh guarantees
    const Eigen::Vector2d e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
    if (e1.x() * e2.y() - e1.y() * e2.x() < 0) std::swap(tri[1], tri[2]);
    TriValues phi{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    TriValues neg{-phi[0], -phi[1], -phi[2]};
    const double a = cut_bulk_rule(tri, phi, 2).weight_sum();
    const double b = cut_bulk_rule(tri, neg, 2).weight_sum();
    REQUIRE(a + b == doctest::Approx(tri_area(tri)).epsilon(1e-13));
  }
}

TEST_CASE("cut bulk rules integrate quadratics exactly on the kept piece") {
  // one negative corner: the kept piece is the similar corner triangle with
  // vertices (0,0), (0.5,0), (0,0.5); quadratic moments there are known
  const QuadratureRule r = cut_bulk_rule(unit_tri, {-1, 1, 1}, 2);
  CHECK(r.weight_sum() == doctest::Approx(0.125).epsilon(1e-14));
  // int x over that triangle = area * centroid_x = 0.125 * (1/6)
  CHECK(integrate(r, [](const Eigen::Vector2d& p) { return p.x(); }) ==
        doctest::Approx(0.125 / 6).epsilon(1e-13));
  // int x^2 = b^4/12 with legs b = 0.5 along x
  CHECK(integrate(r, [](const Eigen::Vector2d& p) { return p.x() * p.x(); }) ==
        doctest::Approx(std::pow(0.5, 4) / 12).epsilon(1e-13));
  // int xy = b^4/24
  CHECK(integrate(r, [](const Eigen::Vector2d& p) { return p.x() * p.y(); }) ==
        doctest::Approx(std::pow(0.5, 4) / 24).epsilon(1e-13));
}

TEST_CASE("order-3 rules integrate cubics exactly on the full triangle") {
  const QuadratureRule r = cut_bulk_rule(unit_tri, {-1, -1, -1}, 3);
  // int over unit triangle of x^3 = 1/20, of x^2 y = 1/60
  CHECK(integrate(r, [](const Eigen::Vector2d& p) { return std::pow(p.x(), 3); }) ==
        doctest::Approx(1.0 / 20).epsilon(1e-13));
  CHECK(integrate(r, [](const Eigen::Vector2d& p) {
          return p.x() * p.x() * p.y();
        }) == doctest::Approx(1.0 / 60).epsilon(1e-13));
}

TEST_CASE("near-zero vertex values snap to the inside") {
  // vertex v0 sits on the interface to machine precision: the snapped rule
  // keeps the half of the triangle on the negative side of the v1-v2 midpoint
  const QuadratureRule r = cut_bulk_rule(unit_tri, {0.0, 1.0, -1.0}, 2);
  const QuadratureRule ref = cut_bulk_rule(unit_tri, {-1e-14, 1.0, -1.0}, 2);
  CHECK(r.weight_sum() == doctest::Approx(ref.weight_sum()).epsilon(1e-12));
  CHECK(r.weight_sum() == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("face rule carries length, Gauss weights and the right-hand normal") {
  const QuadratureRule r = face_rule({0, 0}, {1, 0}, 2);
  REQUIRE(r.weights.size() == 2);
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.weight_sum() == doctest::Approx(1.0).epsilon(1e-14));
  // right-hand normal of (0,0)->(1,0) is (0,-1)
  for (const auto& n : r.normals) {
    CHECK(n.x() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(n.y() == doctest::Approx(-1.0).epsilon(1e-14));
  }
  CHECK(integrate(r, [](const Eigen::Vector2d& p) { return p.x(); }) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("face rules are exact for polynomials up to 2 order - 1") {
  for (int order : {1, 2, 3}) {
    const QuadratureRule r = face_rule({0.2, -0.3}, {0.9, 0.4}, order);
    const double len = std::hypot(0.7, 0.7);
    CHECK(r.weight_sum() == doctest::Approx(len).epsilon(1e-13));
    if (order >= 2) {
      // integrate x^2 along the segment, parametrized arc-length exactly
      const double exact = [] {
        // x(t) = 0.2 + 0.7 t, t in [0,1], ds = len dt
        double s = 0;
        for (double c : {0.04, 2 * 0.2 * 0.7 / 2.0, 0.49 / 3.0}) s += c;
        return s * std::hypot(0.7, 0.7);
      }();
      CHECK(integrate(r, [](const Eigen::Vector2d& p) { return p.x() * p.x(); }) ==
            doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("invalid orders are rejected") {
  CHECK_THROWS_AS(cut_bulk_rule(unit_tri, {-1, -1, -1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(face_rule({0, 0}, {1, 0}, 0), std::invalid_argument);
}
