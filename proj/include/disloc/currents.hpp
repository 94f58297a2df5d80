/**
 * @file currents.hpp
 * @brief de Rham currents on a patch: form-, chain-, weighted-chain- and
 *        Dirac-induced currents, contraction, linear combination, and the
 *        boundary operator in weak and structural form.
 *
 * A Current is an immutable tree. evaluate(T, psi) pairs it with a compactly
 * supported test form; every integral is restricted to the support box of psi
 * so integrands stay polynomial on each simplex whenever the data are.
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "disloc/forms.hpp"
#include "disloc/integrate.hpp"
#include "disloc/quadrature.hpp"
#include "disloc/simplex.hpp"

namespace disloc::currents {

using forms::Form;
using forms::PiecewiseForm;
using forms::TestForm;
using geometry::Box;
using geometry::Chain;
using geometry::Patch;
using geometry::QuadratureRule;
using geometry::Vec;

struct CurrentNode;

/// A current of fixed degree (the degree of the test forms it accepts).
class Current {
 public:
  Current() = default;
  Current(Patch patch, int degree, std::shared_ptr<const CurrentNode> node)
      : patch_(std::move(patch)), degree_(degree), node_(std::move(node)) {}

  const Patch& patch() const { return patch_; }
  int degree() const { return degree_; }
  const CurrentNode& node() const { return *node_; }
  bool valid() const { return node_ != nullptr; }

  template <class T>
  const T* as() const;

 private:
  Patch patch_;
  int degree_ = 0;
  std::shared_ptr<const CurrentNode> node_;
};

struct WholePatch {};
using Region = std::variant<WholePatch, Box, Chain>;
using LayerForm = std::variant<Form, PiecewiseForm>;

/// Default per-axis mesh resolution for non-polynomial integrands.
inline constexpr int kDefaultResolution = 8;

/// psi -> int_R phi ^ psi.
struct FormCurrent {
  Region region;
  LayerForm phi;
  int resolution = kDefaultResolution;
};
/// psi -> sum_p a_p int_{s_p} psi.
struct ChainCurrent {
  Chain chain;
};
/// psi -> sum_p a_p int_{s_p} u psi.
struct WeightedChainCurrent {
  Chain chain;
  ScalarField u;
};
/// psi -> psi(x0)(v_1..v_k).
struct DiracCurrent {
  Vec x0;
  std::vector<Vec> vectors;
};
/// psi -> T(alpha ^ psi).
struct Contraction {
  Current inner;
  Form alpha;
};
/// psi -> sum_i c_i T_i(psi).
struct Combination {
  std::vector<std::pair<double, Current>> terms;
};
/// omega -> T(d omega).
struct WeakBoundary {
  Current inner;
};

struct CurrentNode {
  std::variant<FormCurrent, ChainCurrent, WeightedChainCurrent, DiracCurrent, Contraction, Combination, WeakBoundary> v;
};

template <class T>
const T* Current::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}

namespace detail {

inline Current make(const Patch& patch, int degree, CurrentNode node) {
  return Current(patch, degree, std::make_shared<const CurrentNode>(std::move(node)));
}

inline int layer_degree(const LayerForm& phi) {
  return std::visit([](const auto& f) { return f.degree(); }, phi);
}
inline const Patch& layer_patch(const LayerForm& phi) {
  return std::visit([](const auto& f) -> const Patch& { return f.patch(); }, phi);
}

inline void require_chain_in_patch(const Chain& c, const Patch& patch, const char* what) {
  if (c.ambient_dim() != patch.dim()) throw Error(std::string(what) + ": chain dimension differs from the patch");
  for (const auto& [verts, a] : c.terms())
    for (const auto& x : verts) patch.require_contains(x, what);
}

}  // namespace detail

/// T_phi on the region (whole patch, a box, or an n-chain); degree n - deg phi.
inline Current form_current(const Patch& patch, LayerForm phi, Region region = WholePatch{},
                            int resolution = kDefaultResolution) {
  if (!(detail::layer_patch(phi) == patch)) throw Error("form_current: form lives on another patch");
  if (resolution < 0) throw Error("form_current: negative resolution");
  if (const auto* b = std::get_if<Box>(&region)) {
    if (b->dim() != patch.dim() || !b->solid()) throw Error("form_current: region box must be solid");
    if (!patch.bounds().contains(b->lo()) || !patch.bounds().contains(b->hi()))
      throw Error("form_current: region box leaves the patch");
  }
  if (const auto* c = std::get_if<Chain>(&region)) {
    if (c->degree() != patch.dim()) throw Error("form_current: region chain must have top degree");
    detail::require_chain_in_patch(*c, patch, "form_current");
  }
  const int deg = patch.dim() - detail::layer_degree(phi);
  return detail::make(patch, deg, {FormCurrent{std::move(region), std::move(phi), resolution}});
}

/// T_A; degree k of the chain.
inline Current chain_current(const Patch& patch, Chain chain) {
  detail::require_chain_in_patch(chain, patch, "chain_current");
  const int k = chain.degree();
  return detail::make(patch, k, {ChainCurrent{std::move(chain)}});
}

/// T_{uA}; u needs analytic partials (its gradient enters the boundary rule).
inline Current weighted_chain_current(const Patch& patch, Chain chain, ScalarField u) {
  detail::require_chain_in_patch(chain, patch, "weighted_chain_current");
  if (!u.has_analytic_partials()) throw Error("weighted_chain_current: the weight needs an analytic gradient");
  const int k = chain.degree();
  return detail::make(patch, k, {WeightedChainCurrent{std::move(chain), std::move(u)}});
}

inline Current dirac_current(const Patch& patch, Vec x0, std::vector<Vec> vectors) {
  patch.require_contains(x0, "dirac_current");
  if (static_cast<int>(vectors.size()) > patch.dim()) throw Error("dirac_current: more vectors than dimensions");
  for (const auto& v : vectors)
    if (v.dim() != patch.dim()) throw Error("dirac_current: vector dimension differs from the patch");
  const int k = static_cast<int>(vectors.size());
  return detail::make(patch, k, {DiracCurrent{std::move(x0), std::move(vectors)}});
}

/// The zero current of a given degree.
inline Current zero_current(const Patch& patch, int degree) {
  if (degree < 0 || degree > patch.dim()) throw Error("zero_current: degree out of range");
  return detail::make(patch, degree, {Combination{}});
}

/// T ⌞ alpha: omega -> T(alpha ^ omega).
inline Current contract(const Current& T, Form alpha) {
  if (alpha.degree() > T.degree())
    throw Error("contract: form degree " + std::to_string(alpha.degree()) + " exceeds current degree " +
                std::to_string(T.degree()));
  if (!(alpha.patch() == T.patch())) throw Error("contract: form lives on another patch");
  const int deg = T.degree() - alpha.degree();
  return detail::make(T.patch(), deg, {Contraction{T, std::move(alpha)}});
}

/// sum_i c_i T_i, all of the declared degree.
inline Current combine(const Patch& patch, int degree, std::vector<std::pair<double, Current>> terms) {
  for (const auto& [c, T] : terms) {
    if (T.degree() != degree)
      throw Error("combine: term of degree " + std::to_string(T.degree()) + " in a combination of degree " +
                  std::to_string(degree));
    if (!(T.patch() == patch)) throw Error("combine: term on another patch");
  }
  if (degree < 0 || degree > patch.dim()) throw Error("combine: degree out of range");
  return detail::make(patch, degree, {Combination{std::move(terms)}});
}

inline Current combine(std::vector<std::pair<double, Current>> terms) {
  if (terms.empty()) throw Error("combine: an empty combination needs a declared degree");
  const Patch patch = terms.front().second.patch();
  const int degree = terms.front().second.degree();
  return combine(patch, degree, std::move(terms));
}

/// Lazy boundary: omega -> T(d omega).
inline Current boundary_weak(const Current& T) {
  if (T.degree() == 0) throw Error("boundary_weak: a 0-current has no boundary");
  return detail::make(T.patch(), T.degree() - 1, {WeakBoundary{T}});
}

// ---------------------------------------------------------------------------
// evaluation

namespace detail {

inline double evaluate_form_current(const FormCurrent& fc, const Patch& patch, const TestForm& psi,
                                    const QuadratureRule& q) {
  std::vector<std::pair<Box, Form>> pieces;
  if (const auto* f = std::get_if<Form>(&fc.phi))
    pieces.emplace_back(patch.bounds(), *f);
  else
    for (const auto& p : std::get<PiecewiseForm>(fc.phi).pieces()) pieces.emplace_back(p.region, p.form);

  double total = 0;
  for (const auto& [piece_box, phi] : pieces) {
    const auto cell = piece_box.intersect_solid(psi.support());
    if (!cell) continue;
    const Form integrand = forms::wedge(phi, psi.form());
    if (integrand.is_zero()) continue;
    if (const auto* chain = std::get_if<Chain>(&fc.region)) {
      total += integrate_over_chain(*chain, integrand, q, &*cell);
      continue;
    }
    std::optional<Box> dom = cell;
    if (const auto* rb = std::get_if<Box>(&fc.region)) dom = rb->intersect_solid(*cell);
    if (!dom) continue;
    int res = 1;
    if (!integrand.polynomial_degree()) {
      if (fc.resolution < 1)
        throw Error("evaluate: form current over an unmeshed region needs a resolution for non-polynomial data");
      res = fc.resolution;
    }
    total += integrate_over_chain(geometry::triangulate_box(*dom, res), integrand, q);
  }
  return total;
}

}  // namespace detail

/// T(psi).
inline double evaluate(const Current& T, const TestForm& psi,
                       const QuadratureRule& q = QuadratureRule::of_order(QuadratureRule::kDefaultOrder)) {
  if (!T.valid()) throw Error("evaluate: empty current");
  if (psi.degree() != T.degree())
    throw Error("evaluate: test form of degree " + std::to_string(psi.degree()) + " applied to a " +
                std::to_string(T.degree()) + "-current");
  if (!(psi.patch() == T.patch())) throw Error("evaluate: test form lives on another patch");
  const auto& v = T.node().v;
  if (const auto* fc = std::get_if<FormCurrent>(&v)) return detail::evaluate_form_current(*fc, T.patch(), psi, q);
  if (const auto* cc = std::get_if<ChainCurrent>(&v)) return integrate_over_chain(cc->chain, psi, q, &psi.support());
  if (const auto* wc = std::get_if<WeightedChainCurrent>(&v)) {
    const Form uw = forms::wedge(Form::scalar(T.patch(), wc->u), psi.form());
    return integrate_over_chain(wc->chain, uw, q, &psi.support());
  }
  if (const auto* dc = std::get_if<DiracCurrent>(&v)) return psi.evaluate(dc->x0, dc->vectors);
  if (const auto* ct = std::get_if<Contraction>(&v)) return evaluate(ct->inner, forms::wedge(ct->alpha, psi), q);
  if (const auto* cb = std::get_if<Combination>(&v)) {
    double s = 0;
    for (const auto& [c, Ti] : cb->terms)
      if (c != 0.0) s += c * evaluate(Ti, psi, q);
    return s;
  }
  const auto& wb = std::get<WeakBoundary>(v);
  return evaluate(wb.inner, forms::exterior_derivative(psi), q);
}

/// Probe values at or below this are treated as zero.
inline double zero_threshold(double probe_amplitude, const Box& support) {
  return 1e-9 * std::abs(probe_amplitude) * support.volume();
}

// ---------------------------------------------------------------------------
// structural boundary

namespace detail {

inline Chain open_boundary(const Chain& c, const Patch& patch) {
  return geometry::restrict_to_open_patch(geometry::boundary_chain(c), patch);
}

inline bool has_terms(const Current& T) {
  if (const auto* cb = T.as<Combination>()) return !cb->terms.empty();
  if (const auto* cc = T.as<ChainCurrent>()) return !cc->chain.empty();
  if (const auto* wc = T.as<WeightedChainCurrent>()) return !wc->chain.empty();
  return true;
}

inline Form differentiate(const Form& f, std::optional<double> fd_step) {
  return forms::exterior_derivative(f, f.has_analytic_partials() ? std::nullopt : fd_step);
}

/// Moves the simplices shared (with opposite sign) by a and b into the returned chain (taken from a).
inline Chain split_interface(Chain& a, Chain& b) {
  Chain shared(a.ambient_dim(), a.degree()), rest_a(a.ambient_dim(), a.degree()), rest_b = b;
  for (const auto& [k, c] : a.terms()) {
    auto it = b.terms().find(k);
    if (it != b.terms().end() && std::abs(it->second + c) <= 1e-12 * std::abs(c)) {
      shared.add_canonical(k, c);
      rest_b.add_canonical(k, -it->second);
    } else {
      rest_a.add_canonical(k, c);
    }
  }
  a = std::move(rest_a);
  b = std::move(rest_b);
  return shared;
}

inline Current structural_form_current(const Current& T, const FormCurrent& fc, std::optional<double> fd_step) {
  const Patch& patch = T.patch();
  const int n = patch.dim();
  const int r = layer_degree(fc.phi);
  const double sign_edge = (r % 2 == 0) ? 1.0 : -1.0;  // (-1)^r
  std::vector<std::pair<double, Current>> terms;

  // (-1)^{r+1} T_{d phi, R} on each piece
  auto push_interior = [&](const Region& region, const Form& phi) {
    if (r >= n) return;
    const Form dphi = differentiate(phi, fd_step);
    if (dphi.is_zero()) return;
    terms.emplace_back(-sign_edge, form_current(patch, dphi, region, fc.resolution));
  };

  auto region_chain = [&](const Box* piece) -> std::optional<Chain> {
    if (std::holds_alternative<WholePatch>(fc.region)) {
      if (!piece) return std::nullopt;
      return geometry::triangulate_box(*piece, 1);
    }
    if (const auto* b = std::get_if<Box>(&fc.region)) {
      if (!piece) return geometry::triangulate_box(*b, 1);
      auto cut = b->intersect_solid(*piece);
      if (!cut) return Chain(n, n);
      return geometry::triangulate_box(*cut, 1);
    }
    const auto& c = std::get<Chain>(fc.region);
    return piece ? geometry::clip_chain_to_box(c, *piece) : c;
  };
  auto piece_region = [&](const Box& piece) -> Region {
    if (std::holds_alternative<WholePatch>(fc.region)) return piece;
    if (const auto* b = std::get_if<Box>(&fc.region)) {
      auto cut = b->intersect_solid(piece);
      if (!cut) return Chain(n, n);
      return *cut;
    }
    return geometry::clip_chain_to_box(std::get<Chain>(fc.region), piece);
  };

  if (const auto* phi = std::get_if<Form>(&fc.phi)) {
    push_interior(fc.region, *phi);
    if (auto rc = region_chain(nullptr)) {
      Chain edge = open_boundary(*rc, patch);
      if (!edge.empty()) terms.emplace_back(sign_edge, contract(chain_current(patch, std::move(edge)), *phi));
    }
    return combine(patch, T.degree() - 1, std::move(terms));
  }

  const auto& pw = std::get<PiecewiseForm>(fc.phi);
  const auto& pieces = pw.pieces();
  std::vector<Chain> edges;
  for (const auto& p : pieces) {
    Region reg = piece_region(p.region);
    if (const auto* c = std::get_if<Chain>(&reg); c && c->empty()) {
      edges.emplace_back(n, n - 1);
      continue;
    }
    push_interior(reg, p.form);
    edges.push_back(open_boundary(*region_chain(&p.region), patch));
  }
  // interfaces: faces shared by two pieces carry the jump phi_i - phi_j, oriented as the boundary of piece i
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      Chain z = split_interface(edges[i], edges[j]);
      if (z.empty()) continue;
      const Form jump = pieces[i].form - pieces[j].form;
      if (jump.is_zero()) continue;
      terms.emplace_back(sign_edge, contract(chain_current(patch, std::move(z)), jump));
    }
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (!edges[i].empty()) terms.emplace_back(sign_edge, contract(chain_current(patch, edges[i]), pieces[i].form));
  return combine(patch, T.degree() - 1, std::move(terms));
}

}  // namespace detail

/// Symbolic boundary by rewrite rules; throws for Dirac and contraction currents.
inline Current boundary_structural(const Current& T, std::optional<double> fd_step = std::nullopt) {
  if (!T.valid()) throw Error("boundary_structural: empty current");
  if (T.degree() == 0) throw Error("boundary_structural: a 0-current has no boundary");
  const Patch& patch = T.patch();
  const auto& v = T.node().v;
  if (const auto* fc = std::get_if<FormCurrent>(&v)) return detail::structural_form_current(T, *fc, fd_step);
  if (const auto* cc = std::get_if<ChainCurrent>(&v))
    return chain_current(patch, detail::open_boundary(cc->chain, patch));
  if (const auto* wc = std::get_if<WeightedChainCurrent>(&v)) {
    Chain edge = detail::open_boundary(wc->chain, patch);
    if (auto c = wc->u.constant_value()) return chain_current(patch, edge.scaled(*c));
    std::vector<std::pair<double, Current>> terms;
    if (!edge.empty()) terms.emplace_back(1.0, weighted_chain_current(patch, std::move(edge), wc->u));
    Form du = detail::differentiate(Form::scalar(patch, wc->u), fd_step);
    if (!du.is_zero()) terms.emplace_back(-1.0, contract(chain_current(patch, wc->chain), du));
    return combine(patch, T.degree() - 1, std::move(terms));
  }
  if (const auto* cb = std::get_if<Combination>(&v)) {
    std::vector<std::pair<double, Current>> terms;
    for (const auto& [c, Ti] : cb->terms) {
      if (c == 0.0) continue;
      Current b = boundary_structural(Ti, fd_step);
      if (detail::has_terms(b)) terms.emplace_back(c, std::move(b));
    }
    return combine(patch, T.degree() - 1, std::move(terms));
  }
  if (const auto* wb = std::get_if<WeakBoundary>(&v))
    return boundary_structural(boundary_structural(wb->inner, fd_step), fd_step);
  throw Error("boundary_structural: no structural rule; use boundary_weak");
}

// ---------------------------------------------------------------------------
// description

namespace detail {

inline nlohmann::json vec_json(const Vec& x) { return x.to_vector(); }

inline nlohmann::json chain_json(const Chain& c) {
  nlohmann::json j = {{"degree", c.degree()}, {"simplices", c.size()}, {"mass", c.mass()}};
  if (c.size() <= 8) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [verts, a] : c.terms()) {
      nlohmann::json vs = nlohmann::json::array();
      for (const auto& x : verts) vs.push_back(vec_json(x));
      terms.push_back({{"coefficient", a}, {"vertices", vs}});
    }
    j["terms"] = terms;
  }
  return j;
}

inline std::string layer_str(const LayerForm& phi) {
  if (const auto* f = std::get_if<Form>(&phi)) return f->str();
  std::string s;
  for (const auto& p : std::get<PiecewiseForm>(phi).pieces())
    s += (s.empty() ? "" : "; ") + p.region.str() + ": " + p.form.str();
  return "piecewise{" + s + "}";
}

}  // namespace detail

/// Term tree of a current (variant, geometry, coefficients).
inline nlohmann::json describe(const Current& T) {
  nlohmann::json j = {{"degree", T.degree()}};
  const auto& v = T.node().v;
  if (const auto* fc = std::get_if<FormCurrent>(&v)) {
    j["kind"] = "form";
    j["form"] = detail::layer_str(fc->phi);
    if (std::holds_alternative<WholePatch>(fc->region))
      j["region"] = "patch";
    else if (const auto* b = std::get_if<Box>(&fc->region))
      j["region"] = b->str();
    else
      j["region"] = detail::chain_json(std::get<Chain>(fc->region));
  } else if (const auto* cc = std::get_if<ChainCurrent>(&v)) {
    j["kind"] = "chain";
    j["chain"] = detail::chain_json(cc->chain);
  } else if (const auto* wc = std::get_if<WeightedChainCurrent>(&v)) {
    j["kind"] = "weighted_chain";
    j["weight"] = wc->u.str();
    j["chain"] = detail::chain_json(wc->chain);
  } else if (const auto* dc = std::get_if<DiracCurrent>(&v)) {
    j["kind"] = "dirac";
    j["point"] = detail::vec_json(dc->x0);
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& x : dc->vectors) vs.push_back(detail::vec_json(x));
    j["vectors"] = vs;
  } else if (const auto* ct = std::get_if<Contraction>(&v)) {
    j["kind"] = "contraction";
    j["form"] = ct->alpha.str();
    j["current"] = describe(ct->inner);
  } else if (const auto* cb = std::get_if<Combination>(&v)) {
    j["kind"] = "combination";
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [c, Ti] : cb->terms) terms.push_back({{"weight", c}, {"current", describe(Ti)}});
    j["terms"] = terms;
  } else {
    j["kind"] = "weak_boundary";
    j["current"] = describe(std::get<WeakBoundary>(v).inner);
  }
  return j;
}

}  // namespace disloc::currents
