#include <catch_amalgamated.hpp>

#include <cmath>

#include "disloc/dislocation.hpp"

using namespace disloc;
using namespace disloc::dislocation;
using forms::Form;
using forms::make_index;
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

ScalarField c3(double v) { return ScalarField::constant(3, v); }

}  // namespace

TEST_CASE("dislocation density of a layering") {
  const Patch p = Patch::cube(3);
  const Form phi(p, 1, {{make_index({0}), poly(3, {{{0, 1, 0}, 1.0}})}});
  const Form delta = dislocation_density(phi);
  CHECK(delta.component(make_index({0, 1}))(Vec{0.2, 0.3, 0.4}) == -1.0);
  CHECK(dislocation_density(Form::basis(p, make_index({0}))).is_zero());
  CHECK_THROWS_AS(dislocation_density(Form(p, 2)), Error);
}

TEST_CASE("total dislocation through a unit square") {
  const Patch p = Patch::cube(3);
  const Form phi(p, 1, {{make_index({0}), poly(3, {{{0, 1, 0}, 1.0}})}});
  const Chain Z = parallelogram(Vec{0, 0, 0}, Vec{0.5, 0, 0}, Vec{0, 0.5, 0});
  const auto t = total_dislocation(phi, Z);
  CHECK(t.interior_integral == Approx(-0.25));
  CHECK(t.boundary_integral == Approx(-0.25));
  CHECK_THROWS_AS(total_dislocation(phi, geometry::boundary_chain(Z)), Error);
}

TEST_CASE("coframe torsion") {
  const Patch p = Patch::cube(3);
  CoframeField cf(p, {{c3(1), c3(0), c3(0)}, {c3(0), c3(1), poly(3, {{{1, 0, 0}, 1.0}})}, {c3(0), c3(0), c3(1)}});
  const auto tau = torsion(cf);
  CHECK(tau[0].is_zero());
  CHECK(tau[2].is_zero());
  CHECK(tau[1].component(make_index({0, 2}))(Vec{0.1, 0.2, 0.3}) == 1.0);
  CHECK_THROWS_AS(CoframeField(p, {{c3(1), c3(0), c3(0)}, {c3(1), c3(0), c3(0)}, {c3(0), c3(0), c3(1)}}), Error);
}

TEST_CASE("Burgers bracket of a sheared frame") {
  const Patch p = Patch::cube(3);
  // e1 = d1, e2 = d2, e3 = d3 - x1 d2
  FrameField ff(p, {{c3(1), c3(0), c3(0)}, {c3(0), c3(1), poly(3, {{{1, 0, 0}, -1.0}})}, {c3(0), c3(0), c3(1)}});
  const auto b = burgers_bracket(ff, 0, 2, Vec{0.2, 0.1, 0.3});
  CHECK(b.component_formula[1] == Approx(-1.0));
  CHECK(b.contraction_formula[1] == Approx(-1.0));
  CHECK(b.agree);
  REQUIRE(b.edge);
  CHECK((*b.edge + *b.screw - b.component_formula).norm() < 1e-12);
  CHECK(burgers_bracket(ff, 0, 1, Vec{0, 0, 0}).component_formula.norm() == 0.0);
  CHECK_THROWS_AS(burgers_bracket(ff, 1, 1, Vec{0, 0, 0}), Error);
  CHECK_THROWS_AS(burgers_bracket(ff, 0, 3, Vec{0, 0, 0}), Error);
  CHECK(duality_defect(ff, CoframeField(p, {{c3(1), c3(0), c3(0)},
                                            {c3(0), c3(1), poly(3, {{{1, 0, 0}, 1.0}})},
                                            {c3(0), c3(0), c3(1)}})) < 1e-14);
}

TEST_CASE("tube flux of an exact torsion") {
  const Patch p = Patch::cube(3);
  const Form eta(p, 1, {{make_index({0}), poly(3, {{{0, 1, 1}, 1.0}})}, {make_index({2}), poly(3, {{{2, 0, 0}, 1.0}})}});
  const forms::VectorValuedForm tau({forms::exterior_derivative(eta)});
  const Chain flat = parallelogram(Vec{-0.5, -0.5, 0}, Vec{1, 0, 0}, Vec{0, 1, 0});
  const Chain tilted = parallelogram(Vec{-0.5, -0.5, 0}, Vec{1, 0, 0.3}, Vec{0, 1, 0});
  // a lid with the same rim: flat plus the boundary of a tetrahedron pair
  Chain solid(3, 3);
  solid.add(OrientedSimplex({Vec{0, 0, 0.7}, Vec{-0.5, -0.5, 0}, Vec{0.5, -0.5, 0}, Vec{0.5, 0.5, 0}}));
  const Chain dome = flat + geometry::boundary_chain(solid);
  const auto r = tube_flux_check(tau, flat, dome);
  CHECK(r.residual[0] < 1e-12);
  CHECK(r.flux1[0] == Approx(r.flux2[0]));
  CHECK(std::abs(tube_flux_check(tau, flat, tilted).residual[0]) > 1e-3);
}

TEST_CASE("dislocation current prefers the structural boundary") {
  const Patch p = Patch::cube(3);
  const auto d = dislocation_current(currents::chain_current(p, half_plane_cube()));
  CHECK(d.structural);
  const auto* c = d.current.as<currents::ChainCurrent>();
  REQUIRE(c);
  CHECK(c->chain == segment(Vec{0, 0, -1}, Vec{0, 0, 1}));
}

TEST_CASE("support detection") {
  const Patch p = Patch::cube(2);
  const auto D = dislocation_current(currents::form_current(p, forms::step_interface_form(p, 2.0)));
  const auto cells = detect_support(D.current, 4);
  CHECK(cells.size() == 8);
  for (const auto& c : cells) CHECK((c.index[1] == 1 || c.index[1] == 2));
  CHECK(detect_support(dislocation_current(currents::form_current(p, forms::step_interface_form(p, 1.0))).current, 4)
            .empty());
  CHECK_THROWS_AS(detect_support(D.current, 1), Error);
  // probe boxes stay inside the patch
  const Box b = probe_box(p, Box(Vec{-1, -1}, Vec{-0.5, -0.5}));
  CHECK(p.bounds().strictly_contains(b));
  CHECK(b.hi()[0] > -0.5);
}

TEST_CASE("Frank node check") {
  const Patch p = Patch::cube(3);
  const auto L = fork_lines();
  const auto ok = frank_node_check(p, {{2, L.L1}, {1, L.L2}, {1, L.L3}});
  CHECK(ok.node == Vec{0, 0, 0});
  CHECK(ok.signs == std::vector<int>{-1, 1, 1});
  CHECK(ok.signed_sum == 0.0);
  CHECK(ok.residual < 1e-12);
  const auto bad = frank_node_check(p, {{1, L.L1}, {1, L.L2}, {1, L.L3}});
  CHECK(bad.residual == Approx(1.0));
  CHECK_THROWS_AS(frank_node_check(p, {{1, segment(Vec{0.1, 0, 0}, Vec{0.5, 0, 0})}}), Error);
  CHECK_THROWS_AS(frank_node_check(p, {{1, L.L1}, {1, segment(Vec{0.2, 0, 0}, Vec{1, 0, 0})}}), Error);
}

TEST_CASE("Frank constancy check") {
  const Patch p = Patch::cube(2);
  const Chain loop = geometry::boundary_chain(geometry::triangulate_box(Box(Vec{-0.5, -0.5}, Vec{0.5, 0.5}), 1));
  const auto ok = frank_constancy_check(ScalarField::constant(2, 3.0), p, loop);
  CHECK(ok.consistent);
  CHECK(ok.residual == 0.0);
  const auto bad = frank_constancy_check(poly(2, {{{1, 0, 0}, 1.0}}), p, loop);
  CHECK_FALSE(bad.consistent);
  CHECK(bad.residual > 0.1);
  CHECK_THROWS_AS(frank_constancy_check(ScalarField::constant(2, 1.0), p, segment(Vec{0, 0}, Vec{0.5, 0})), Error);
  CHECK_NOTHROW(frank_constancy_check(ScalarField::constant(2, 1.0), p, segment(Vec{0, 0}, Vec{0.5, 0}), {}, true));
}
