#include <catch_amalgamated.hpp>

#include <cmath>

#include "disloc/currents.hpp"
#include "disloc/dislocation.hpp"

using namespace disloc;
using namespace disloc::currents;
using forms::Form;
using forms::make_index;
using forms::TestForm;
using geometry::Box;
using geometry::Chain;
using geometry::OrientedSimplex;
using geometry::Patch;
using geometry::Vec;
using Catch::Approx;

namespace {

const double kBump = 256.0 / 315.0;  // int_{-1}^{1} (1 - t^2)^4 dt

TestForm bump(const Patch& p, Vec c, Vec r, forms::MultiIndex I, double amp = 1.0) {
  return forms::make_bump_testform(p, c, r, forms::kDefaultBumpPower, I, amp);
}

Chain segment(Vec a, Vec b) {
  Chain c(a.dim(), 1);
  c.add(OrientedSimplex({a, b}));
  return c;
}

}  // namespace

TEST_CASE("form current pairs by the wedge product") {
  const Patch p = Patch::cube(2);
  const Current T = form_current(p, Form::basis(p, make_index({0})));
  CHECK(T.degree() == 1);
  const TestForm g = bump(p, Vec{0.1, 0.2}, Vec{0.4, 0.3}, make_index({1}), 2.0);
  CHECK(evaluate(T, g) == Approx(2.0 * 0.4 * 0.3 * kBump * kBump).epsilon(1e-13));
  // dx1 ^ dx1 = 0
  CHECK(evaluate(T, bump(p, Vec{0.1, 0.2}, Vec{0.4, 0.3}, make_index({0}))) == 0.0);
  CHECK_THROWS_AS(evaluate(T, bump(p, Vec{0, 0}, Vec{0.5, 0.5}, 0u)), Error);
}

TEST_CASE("form current restricted to a box sees only the overlap") {
  const Patch p = Patch::cube(2);
  const Current T = form_current(p, Form::basis(p, make_index({0})), Box(Vec{0, -1}, Vec{1, 1}));
  // half of the bump lies in x1 >= 0
  const TestForm g = bump(p, Vec{0, 0}, Vec{0.5, 0.5}, make_index({1}));
  CHECK(evaluate(T, g) == Approx(0.5 * 0.25 * kBump * kBump).epsilon(1e-13));
  CHECK_THROWS_AS(form_current(p, Form::basis(p, make_index({0})), Box(Vec{0, -1}, Vec{2, 1})), Error);
}

TEST_CASE("chain, weighted chain and Dirac currents") {
  const Patch p = Patch::cube(2);
  const Chain s = segment(Vec{-0.5, 0}, Vec{0.5, 0});
  const TestForm g = bump(p, Vec{0, 0}, Vec{0.5, 0.5}, make_index({0}));
  CHECK(evaluate(chain_current(p, s), g) == Approx(0.5 * kBump).epsilon(1e-13));
  CHECK(evaluate(chain_current(p, s.scaled(-2)), g) == Approx(-kBump).epsilon(1e-13));
  const Current W = weighted_chain_current(p, s, ScalarField::constant(2, 3.0));
  CHECK(evaluate(W, g) == Approx(1.5 * kBump).epsilon(1e-13));
  CHECK_THROWS_AS(chain_current(p, segment(Vec{0, 0}, Vec{2, 0})), Error);

  const Current d = dirac_current(p, Vec{0.1, 0.1}, {Vec{0, 1}});
  CHECK(d.degree() == 1);
  CHECK(evaluate(d, bump(p, Vec{0.1, 0.1}, Vec{0.3, 0.3}, make_index({1}), 5.0)) == 5.0);
  CHECK(evaluate(d, bump(p, Vec{0.1, 0.1}, Vec{0.3, 0.3}, make_index({0}), 5.0)) == 0.0);
}

TEST_CASE("combinations are linear and check degrees") {
  const Patch p = Patch::cube(2);
  const Chain s = segment(Vec{-0.5, 0}, Vec{0.5, 0});
  const Current a = chain_current(p, s);
  const Current c = combine({{2.0, a}, {-0.5, a}});
  const TestForm g = bump(p, Vec{0, 0}, Vec{0.5, 0.5}, make_index({0}));
  CHECK(evaluate(c, g) == Approx(1.5 * evaluate(a, g)));
  CHECK_THROWS_AS(combine({{1.0, a}, {1.0, form_current(p, Form(p, 0))}}), Error);
  CHECK_THROWS_AS(combine(std::vector<std::pair<double, Current>>{}), Error);
  CHECK(evaluate(zero_current(p, 1), g) == 0.0);
}

TEST_CASE("contraction pairs the inner current with alpha wedge psi") {
  const Patch p = Patch::cube(2);
  const Chain s = segment(Vec{-0.5, 0}, Vec{0.5, 0});
  const Current c = contract(chain_current(p, s), Form::basis(p, make_index({0})));
  CHECK(c.degree() == 0);
  const TestForm g = bump(p, Vec{0, 0}, Vec{0.5, 0.5}, 0u);
  CHECK(evaluate(c, g) == Approx(0.5 * kBump).epsilon(1e-13));
  CHECK_THROWS_AS(contract(c, Form::basis(p, make_index({0}))), Error);
}

TEST_CASE("weak boundary of a segment is its endpoint difference") {
  const Patch p = Patch::cube(2);
  const Current T = chain_current(p, segment(Vec{-0.3, 0.1}, Vec{0.4, 0.2}));
  const TestForm g = bump(p, Vec{0, 0}, Vec{0.9, 0.9}, 0u);
  const double expected = g.evaluate(Vec{0.4, 0.2}, {}) - g.evaluate(Vec{-0.3, 0.1}, {});
  CHECK(evaluate(boundary_weak(T), g) == Approx(expected).epsilon(1e-12));
  CHECK(evaluate(boundary_structural(T), g) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("structural boundary of a form current") {
  const Patch p = Patch::cube(2);
  Polynomial px(2);
  px.add_term({1, 1, 0}, 1.0);
  const Form phi(p, 1, {{make_index({1}), ScalarField::polynomial(px)}});
  // whole patch: only d phi survives
  const Current S = boundary_structural(form_current(p, phi));
  const Current W = boundary_weak(form_current(p, phi));
  for (const Vec& c : {Vec{0, 0}, Vec{0.3, -0.2}, Vec{-0.4, 0.5}}) {
    const TestForm g = bump(p, c, Vec{0.4, 0.4}, 0u);
    CHECK(evaluate(S, g) == Approx(evaluate(W, g)).epsilon(1e-12).margin(1e-14));
  }
  // box region adds a boundary contraction
  const Current R = form_current(p, phi, Box(Vec{-0.5, -0.5}, Vec{0.3, 0.4}));
  for (const Vec& c : {Vec{-0.5, 0}, Vec{0.3, 0.4}, Vec{0, 0}}) {
    const TestForm g = bump(p, c, Vec{0.3, 0.3}, 0u);
    CHECK(evaluate(boundary_structural(R), g) == Approx(evaluate(boundary_weak(R), g)).epsilon(1e-12).margin(1e-14));
  }
}

TEST_CASE("structural boundary of a weighted chain") {
  const Patch p = Patch::cube(2);
  Polynomial u(2);
  u.add_term({1, 0, 0}, 1.0);
  u.add_term({0, 2, 0}, 0.5);
  const Chain A = geometry::triangulate_box(Box(Vec{-0.5, -0.5}, Vec{0.5, 0.4}), 1);
  const Current T = weighted_chain_current(p, A, ScalarField::polynomial(u));
  for (const Vec& c : {Vec{-0.5, 0}, Vec{0.5, 0.4}, Vec{0, -0.5}}) {
    const TestForm g = bump(p, c, Vec{0.3, 0.3}, make_index({0}));
    CHECK(evaluate(boundary_structural(T), g) == Approx(evaluate(boundary_weak(T), g)).epsilon(1e-12).margin(1e-14));
  }
}

TEST_CASE("no structural rule for Dirac currents and contractions") {
  const Patch p = Patch::cube(2);
  const Current d = dirac_current(p, Vec{0, 0}, {Vec{1, 0}});
  CHECK_THROWS_WITH(boundary_structural(d), Catch::Matchers::ContainsSubstring("use boundary_weak"));
  CHECK(dislocation::dislocation_current(d).structural == false);
  CHECK_THROWS_AS(boundary_weak(zero_current(p, 0)), Error);
}

TEST_CASE("step interface boundary is the scaled interface line") {
  const Patch p = Patch::cube(2);
  for (double a : {0.5, 2.0, 3.0}) {
    const Current D = boundary_structural(form_current(p, forms::step_interface_form(p, a)));
    const Current L = dislocation::step_interface_line_current(p);
    for (const Vec& c : {Vec{0, 0}, Vec{0.4, 0.1}, Vec{-0.3, -0.2}}) {
      const TestForm g = bump(p, c, Vec{0.3, 0.3}, 0u);
      CHECK(evaluate(D, g) == Approx((a - 1) * evaluate(L, g)).margin(1e-14));
    }
  }
}

TEST_CASE("zero threshold scales with amplitude and support") {
  CHECK(zero_threshold(2.0, Box(Vec{0, 0}, Vec{0.5, 0.5})) == Approx(0.5e-9));
}

TEST_CASE("describe gives a term tree") {
  const Patch p = Patch::cube(2);
  const Current D = boundary_structural(form_current(p, forms::step_interface_form(p, 2.0)));
  const auto j = describe(D);
  CHECK(j.contains("kind"));
  CHECK(j.dump().find("chain") != std::string::npos);
}
