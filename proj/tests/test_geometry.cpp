#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "disloc/simplex.hpp"

using namespace disloc;
using namespace disloc::geometry;
using Catch::Approx;

namespace {

// int over the reference k-simplex of prod lambda_j^a_j, from the Beta-function recursion.
double moment_oracle(int k, std::array<int, 3> a) {
  double num = std::tgamma(k + 1.0);
  int total = 0;
  for (int j = 0; j < k; ++j) {
    num *= std::tgamma(a[j] + 1.0);
    total += a[j];
  }
  return num / std::tgamma(total + k + 1.0);
}

}  // namespace

TEST_CASE("box and patch basics") {
  const Box b(Vec{0, -1}, Vec{2, 1});
  CHECK(b.volume() == 4.0);
  CHECK(b.solid());
  CHECK_FALSE(Box(Vec{0, 0}, Vec{0, 1}).solid());
  CHECK_THROWS_AS(Box(Vec{1, 0}, Vec{0, 1}), Error);
  CHECK_THROWS_AS(Patch(Box(Vec{0}, Vec{1})), Error);

  const Patch p = Patch::cube(3);
  CHECK(p.contains(Vec{0.5, -1, 1}));
  CHECK_FALSE(p.contains(Vec{1.1, 0, 0}));
  CHECK(p.on_boundary(Vec{1, 0, 0}));
  CHECK_FALSE(p.on_boundary(Vec{0.2, 0, 0}));
}

TEST_CASE("quadrature rules integrate monomials exactly up to their order") {
  for (int order : {1, 3, 5, 9}) {
    const QuadratureRule& q = QuadratureRule::of_order(order);
    for (int k = 1; k <= 3; ++k) {
      const SimplexRule& r = q.simplex(k);
      for (int a0 = 0; a0 <= order; ++a0)
        for (int a1 = 0; a1 + a0 <= order && (k > 1 || a1 == 0); ++a1) {
          const int a2 = k == 3 ? order - a0 - a1 : 0;
          double s = 0;
          for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double m = r.weights[i];
            const std::array<int, 3> a{a0, a1, a2};
            for (int j = 0; j < k; ++j) m *= std::pow(r.nodes[i][j], a[j]);
            s += m;
          }
          CHECK(s == Approx(moment_oracle(k, {a0, a1, a2})).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("quadrature order limits") {
  CHECK_THROWS_AS(QuadratureRule(0), Error);
  CHECK_THROWS_AS(QuadratureRule(QuadratureRule::kMaxOrder + 1), Error);
  CHECK(&QuadratureRule::of_order(5) == &QuadratureRule::of_order(5));
}

TEST_CASE("oriented simplices reject degenerate input") {
  CHECK_THROWS_AS(OrientedSimplex({Vec{0, 0}, Vec{1, 1}, Vec{2, 2}}), Error);
  CHECK_THROWS_AS(OrientedSimplex({Vec{0, 0}, Vec{1, 0}, Vec{0, 1}, Vec{1, 1}}), Error);
  CHECK_THROWS_AS(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}, 2), Error);
  CHECK(OrientedSimplex({Vec{0, 0}, Vec{2, 0}, Vec{0, 1}}).volume() == Approx(1.0));
}

TEST_CASE("chains cancel reversed simplices and track orientation") {
  Chain c(2, 1);
  c.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}));
  c.add(OrientedSimplex({Vec{1, 0}, Vec{0, 0}}));
  CHECK(c.empty());
  c.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}), 2.0);
  c.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}).reversed(), 0.5);
  REQUIRE(c.size() == 1);
  CHECK(c.terms().begin()->second == 1.5);
  CHECK_THROWS_AS(c.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}, Vec{0, 1}})), Error);
}

TEST_CASE("boundary of a boundary vanishes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    Chain c(3, 3);
    for (int s = 0; s < 3; ++s) {
      std::vector<Vec> v;
      for (int i = 0; i < 4; ++i) v.push_back(Vec{u(rng), u(rng), u(rng)});
      try {
        c.add(OrientedSimplex(v), u(rng));
      } catch (const Error&) {
      }
    }
    if (c.empty()) continue;
    CHECK(boundary_chain(boundary_chain(c)).empty());
  }
  CHECK_THROWS_AS(boundary_chain(Chain(2, 0)), Error);
}

TEST_CASE("boundary of a triangle is its three edges") {
  Chain t(2, 2);
  t.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}, Vec{0, 1}}));
  Chain e(2, 1);
  e.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}));
  e.add(OrientedSimplex({Vec{1, 0}, Vec{0, 1}}));
  e.add(OrientedSimplex({Vec{0, 1}, Vec{0, 0}}));
  CHECK(boundary_chain(t) == e);
}

TEST_CASE("triangulated boxes have the box volume and its boundary") {
  const Box b(Vec{-0.5, 0, 0.25}, Vec{0.5, 0.5, 1});
  for (int res : {1, 2, 3}) {
    const Chain c = triangulate_box(b, res);
    CHECK(c.size() == static_cast<std::size_t>(6 * res * res * res));
    CHECK(c.mass() == Approx(b.volume()).epsilon(1e-12));
    // the boundary is the surface of the box: mass equals surface area
    CHECK(boundary_chain(c).mass() == Approx(2 * (1 * 0.5 + 1 * 0.75 + 0.5 * 0.75)).epsilon(1e-12));
  }
  // positive orientation: every simplex has a positive determinant
  const Chain sq = triangulate_box(Box(Vec{0, 0}, Vec{1, 1}), 2);
  for (const auto& [v, a] : sq.terms()) {
    const double det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[1][1] - v[0][1]) * (v[2][0] - v[0][0]);
    CHECK(det * a > 0);
  }
}

TEST_CASE("restriction to the open patch drops faces on the patch boundary") {
  const Patch p = Patch::cube(2);
  const Chain sq = triangulate_box(Box(Vec{-1, -1}, Vec{1, 1}), 2);
  const Chain inner = restrict_to_open_patch(boundary_chain(sq), p);
  CHECK(inner.empty());
  const Chain half = triangulate_box(Box(Vec{-1, -1}, Vec{1, 0}), 2);
  const Chain edge = restrict_to_open_patch(boundary_chain(half), p);
  CHECK(edge.mass() == Approx(2.0));
}

TEST_CASE("clipping a simplex to a box preserves the intersection volume") {
  // triangle (0,0),(2,0),(0,2) clipped to [0,1]^2: area 1 - 0 (the square lies inside x + y <= 2)
  const auto pieces = clip_simplex_to_box({Vec{0, 0}, Vec{2, 0}, Vec{0, 2}}, Box(Vec{0, 0}, Vec{1, 1}));
  double area = 0;
  for (const auto& p : pieces) area += OrientedSimplex(p).volume();
  CHECK(area == Approx(1.0).epsilon(1e-12));

  // clipped to [0.5,1.5]^2: the region x + y <= 2 inside the box, area 1 - 0.5 * 1 * 1 = 0.5
  double area2 = 0;
  for (const auto& p : clip_simplex_to_box({Vec{0, 0}, Vec{2, 0}, Vec{0, 2}}, Box(Vec{0.5, 0.5}, Vec{1.5, 1.5})))
    area2 += OrientedSimplex(p).volume();
  CHECK(area2 == Approx(0.5).epsilon(1e-12));

  CHECK(clip_simplex_to_box({Vec{0, 0}, Vec{1, 0}, Vec{0, 1}}, Box(Vec{2, 2}, Vec{3, 3})).empty());

  // segment through a cube
  const auto seg = clip_simplex_to_box({Vec{-1, 0, 0}, Vec{1, 0, 0}}, Box(Vec{-0.25, -1, -1}, Vec{0.5, 1, 1}));
  REQUIRE(seg.size() == 1);
  CHECK(OrientedSimplex(seg[0]).volume() == Approx(0.75));
}

TEST_CASE("clipped chains keep orientation") {
  Chain c(2, 2);
  c.add(OrientedSimplex({Vec{0, 0}, Vec{0, 2}, Vec{2, 0}}));  // clockwise
  const Chain k = clip_chain_to_box(c, Box(Vec{0, 0}, Vec{1, 1}));
  double signed_area = 0;
  for (const auto& [v, a] : k.terms()) {
    const double det = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[1][1] - v[0][1]) * (v[2][0] - v[0][0]);
    signed_area += 0.5 * det * a;
  }
  CHECK(signed_area == Approx(-1.0));
}
