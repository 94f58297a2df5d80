#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "disloc/forms.hpp"
#include "disloc/integrate.hpp"

using namespace disloc;
using namespace disloc::forms;
using geometry::Box;
using geometry::Chain;
using geometry::OrientedSimplex;
using geometry::Patch;
using geometry::Vec;
using Catch::Approx;

namespace {

ScalarField poly(int dim, std::initializer_list<std::pair<Exponents, double>> terms) {
  Polynomial p(dim);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return ScalarField::polynomial(p);
}

Form random_form(const Patch& patch, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> e(0, 2);
  std::vector<std::pair<MultiIndex, ScalarField>> comps;
  for (MultiIndex I : multi_indices(patch.dim(), k)) {
    Polynomial p(patch.dim());
    for (int t = 0; t < 3; ++t) p.add_term({e(rng), e(rng), patch.dim() == 3 ? e(rng) : 0}, u(rng));
    comps.emplace_back(I, ScalarField::polynomial(p));
  }
  return Form(patch, k, comps);
}

}  // namespace

TEST_CASE("multi-index helpers") {
  CHECK(multi_indices(3, 2).size() == 3);
  CHECK(multi_indices(3, 0).size() == 1);
  CHECK(make_index({0, 2}) == 5u);
  CHECK(index_name(make_index({0, 2})) == "dx1^dx3");
  CHECK(shuffle_sign(make_index({1}), make_index({0})) == -1);
  CHECK(shuffle_sign(make_index({0}), make_index({1})) == 1);
  CHECK(shuffle_sign(make_index({0, 2}), make_index({1})) == -1);
}

TEST_CASE("basis forms evaluate as determinants") {
  const Patch p = Patch::cube(3);
  const Form w = Form::basis(p, make_index({0, 1}), 2.0);
  CHECK(w.evaluate(Vec{0, 0, 0}, {Vec{1, 0, 0}, Vec{0, 1, 0}}) == 2.0);
  CHECK(w.evaluate(Vec{0, 0, 0}, {Vec{0, 1, 0}, Vec{1, 0, 0}}) == -2.0);
  CHECK(w.evaluate(Vec{0, 0, 0}, {Vec{1, 2, 5}, Vec{3, 4, 7}}) == Approx(2.0 * (1 * 4 - 2 * 3)));
}

TEST_CASE("wedge of one-forms is antisymmetric") {
  const Patch p = Patch::cube(3);
  const Form a = Form::basis(p, make_index({0})), b = Form::basis(p, make_index({1}));
  CHECK(wedge(a, b).component(make_index({0, 1}))(Vec{0, 0, 0}) == 1.0);
  CHECK(wedge(b, a).component(make_index({0, 1}))(Vec{0, 0, 0}) == -1.0);
  CHECK(wedge(a, a).is_zero());
  CHECK_THROWS_AS(wedge(wedge(a, b), wedge(a, b)), Error);
}

TEST_CASE("exterior derivative of known forms") {
  const Patch p = Patch::cube(3);
  // d(x1 x2 dx3) = x2 dx1^dx3 + x1 dx2^dx3
  const Form w(p, 1, {{make_index({2}), poly(3, {{{1, 1, 0}, 1.0}})}});
  const Form dw = exterior_derivative(w);
  const Vec x{0.3, -0.7, 0.2};
  CHECK(dw.component(make_index({0, 2}))(x) == Approx(-0.7));
  CHECK(dw.component(make_index({1, 2}))(x) == Approx(0.3));
  CHECK(dw.component(make_index({0, 1}))(x) == 0.0);
  // d(x2 dx1) = -dx1^dx2
  const Form v(p, 1, {{make_index({0}), poly(3, {{{0, 1, 0}, 1.0}})}});
  CHECK(exterior_derivative(v).component(make_index({0, 1}))(x) == -1.0);
  CHECK_THROWS_AS(exterior_derivative(Form::basis(p, make_index({0, 1, 2}))), Error);
}

TEST_CASE("d of d vanishes and Leibniz holds") {
  std::mt19937_64 rng(11);
  const Patch p = Patch::unit(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 5; ++t) {
    const Form f = random_form(p, 0, rng), g = random_form(p, 1, rng);
    const Form ddf = exterior_derivative(exterior_derivative(f));
    const Form lhs = exterior_derivative(wedge(f, g));
    const Form rhs = wedge(exterior_derivative(f), g) + wedge(f, exterior_derivative(g));
    for (int s = 0; s < 10; ++s) {
      const Vec x{u(rng), u(rng), u(rng)};
      for (MultiIndex I : multi_indices(3, 2)) {
        CHECK(std::abs(ddf.component(I)(x)) < 1e-12);
        CHECK(lhs.component(I)(x) == Approx(rhs.component(I)(x)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("finite-difference derivative of a non-polynomial form") {
  const Patch p = Patch::cube(2);
  auto f = ScalarField::function(2, [](const Vec& x) { return std::sin(x[0]) * x[1]; });
  const Form w(p, 1, {{make_index({1}), f}});
  CHECK_THROWS_AS(exterior_derivative(w), Error);
  const Form dw = exterior_derivative(w, kDefaultFdStep);
  const Vec x{0.4, 0.5};
  CHECK(dw.component(make_index({0, 1}))(x) == Approx(std::cos(0.4) * 0.5).epsilon(1e-8));
}

TEST_CASE("user partials are audited against finite differences") {
  const Patch p = Patch::cube(2);
  auto good = ScalarField::function(
      2, [](const Vec& x) { return x[0] * x[0]; }, {[](const Vec& x) { return 2 * x[0]; }, [](const Vec&) { return 0.0; }});
  auto bad = ScalarField::function(
      2, [](const Vec& x) { return x[0] * x[0]; }, {[](const Vec& x) { return 3 * x[0]; }, [](const Vec&) { return 0.0; }});
  CHECK_NOTHROW(Form(p, 0, {{0u, good}}));
  CHECK_THROWS_AS(Form(p, 0, {{0u, bad}}), Error);
}

TEST_CASE("bump test forms") {
  const Patch p = Patch::cube(2);
  const TestForm g = make_bump_testform(p, Vec{0, 0}, Vec{0.5, 0.5}, 4, 0u, 3.0);
  CHECK(g.evaluate(Vec{0, 0}, {}) == 3.0);
  CHECK(g.evaluate(Vec{0.25, 0}, {}) == Approx(3.0 * std::pow(0.75, 4)));
  CHECK(g.evaluate(Vec{0.6, 0}, {}) == 0.0);
  CHECK_THROWS_AS(make_bump_testform(p, Vec{0.8, 0}, Vec{0.5, 0.5}, 4, 0u, 1.0), Error);
  CHECK_THROWS_AS(make_bump_testform(p, Vec{0, 0}, Vec{0.5, 0.5}, 1, 0u, 1.0), Error);
  // integral of the bump: (256/315)^2 r1 r2
  Chain sq = geometry::triangulate_box(g.support(), 1);
  const Form w = wedge(Form::basis(p, make_index({0, 1})), g.form());
  CHECK(integrate_over_chain(sq, w, geometry::QuadratureRule::of_order(5)) ==
        Approx(3.0 * std::pow(256.0 / 315.0, 2) * 0.25).epsilon(1e-13));
}

TEST_CASE("piecewise forms validate their pieces") {
  const Patch p = Patch::cube(2);
  const Form a = Form::basis(p, make_index({0}));
  const PiecewiseForm step = step_interface_form(p, 2.0);
  const std::vector<Vec> e1{Vec{1, 0}};
  CHECK(step.evaluate(Vec{0, -0.5}, e1) == 1.0);
  CHECK(step.evaluate(Vec{0, 0.5}, e1) == 2.0);
  CHECK_THROWS_AS(step_interface_form(p, 0.0), Error);
  // gap
  CHECK_THROWS_AS(PiecewiseForm(p, {{Box(Vec{-1, -1}, Vec{1, 0}), a}}), Error);
  // overlap
  CHECK_THROWS_AS(PiecewiseForm(p, {{Box(Vec{-1, -1}, Vec{1, 0.5}), a}, {Box(Vec{-1, 0}, Vec{1, 1}), a}}), Error);
  // degree mismatch
  CHECK_THROWS_AS(PiecewiseForm(p, {{Box(Vec{-1, -1}, Vec{1, 0}), a}, {Box(Vec{-1, 0}, Vec{1, 1}), Form(p, 2)}}), Error);
}

TEST_CASE("Stokes on single simplices") {
  std::mt19937_64 rng(3);
  const Patch p = Patch::unit(3);
  const auto& q = geometry::QuadratureRule::of_order(5);
  const std::vector<std::vector<Vec>> simplices = {
      {Vec{0.1, 0.2, 0.3}, Vec{0.9, 0.1, 0.2}},
      {Vec{0.1, 0.2, 0.3}, Vec{0.9, 0.1, 0.2}, Vec{0.4, 0.8, 0.6}},
      {Vec{0.1, 0.2, 0.3}, Vec{0.9, 0.1, 0.2}, Vec{0.4, 0.8, 0.6}, Vec{0.5, 0.4, 0.95}}};
  for (const auto& s : simplices) {
    const int k = static_cast<int>(s.size()) - 1;
    Chain c(3, k);
    c.add(OrientedSimplex(s));
    const Form w = random_form(p, k - 1, rng);
    CHECK(integrate_over_chain(c, exterior_derivative(w), q) ==
          Approx(integrate_over_chain(geometry::boundary_chain(c), w, q)).margin(1e-12));
  }
}

TEST_CASE("integration checks degrees and promotes the rule") {
  const Patch p = Patch::unit(2);
  Chain c(2, 1);
  c.add(OrientedSimplex({Vec{0, 0}, Vec{1, 0}}));
  CHECK_THROWS_AS(integrate_over_chain(c, Form::basis(p, make_index({0, 1})), geometry::QuadratureRule::of_order(5)),
                  Error);
  // x1^9 dx1 on [0,1]: 1/10, beyond the order-1 floor
  const Form w(p, 1, {{make_index({0}), poly(2, {{{9, 0, 0}, 1.0}})}});
  CHECK(integrate_over_chain(c, w, geometry::QuadratureRule::of_order(1)) == Approx(0.1).epsilon(1e-14));
}
