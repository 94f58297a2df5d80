/**
 * @file scalar_field.hpp
 * @brief Immutable scalar coefficient fields: polynomials, separable bumps,
 *        user functions with optional gradients, and their sums and products.
 *
 * Every field knows whether its partial derivatives are analytic and, when it
 * is piecewise polynomial, its total degree. Integration uses the degree to
 * select an exact quadrature rule.
 */
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "disloc/polynomial.hpp"
#include "disloc/vec.hpp"

namespace disloc {

class ScalarField {
 public:
  using Fn = std::function<double(const geometry::Vec&)>;

  /// The zero field.
  ScalarField() = default;

  static ScalarField constant(int dim, double c) { return polynomial(Polynomial::constant(dim, c)); }

  static ScalarField polynomial(Polynomial p) {
    if (p.is_zero()) return {};
    return ScalarField(std::make_shared<const Node>(Node{PolyNode{std::move(p)}}));
  }

  /// amplitude * prod_i factors[i]((x_i - center_i) / radii_i) inside `mask`, zero outside.
  static ScalarField separable(double amplitude, geometry::Vec center, geometry::Vec radii, std::vector<Poly1> factors,
                               geometry::Box mask) {
    if (amplitude == 0.0) return {};
    for (const auto& f : factors)
      if (f.is_zero()) return {};
    if (static_cast<int>(factors.size()) != center.dim()) throw Error("ScalarField: one factor per axis required");
    for (int i = 0; i < radii.dim(); ++i)
      if (!(radii[i] > 0)) throw Error("ScalarField: separable radii must be positive");
    return ScalarField(std::make_shared<const Node>(
        Node{SeparableNode{amplitude, center, radii, std::move(factors), std::move(mask)}}));
  }

  /// A user-supplied field. `gradient`, if non-empty, must hold one function per axis.
  static ScalarField function(int dim, Fn value, std::vector<Fn> gradient = {}, std::optional<int> degree = {},
                              std::string label = "f") {
    if (!gradient.empty() && static_cast<int>(gradient.size()) != dim)
      throw Error("ScalarField: gradient needs one component per axis");
    return ScalarField(std::make_shared<const Node>(
        Node{FuncNode{dim, std::move(value), std::move(gradient), degree, std::move(label), false}}));
  }

  double operator()(const geometry::Vec& x) const {
    if (!node_) return 0.0;
    return std::visit([&](const auto& n) { return eval(n, x); }, node_->v);
  }

  bool is_zero() const { return !node_; }

  /// The value when the field is a known constant polynomial.
  std::optional<double> constant_value() const {
    if (!node_) return 0.0;
    if (auto* p = std::get_if<PolyNode>(&node_->v))
      if (p->p.degree() == 0) return p->p.terms().begin()->second;
    return std::nullopt;
  }

  /// Polynomial degree on each piece of the field's mask; nullopt for non-polynomial fields.
  std::optional<int> degree() const {
    if (!node_) return 0;
    return std::visit([](const auto& n) { return deg(n); }, node_->v);
  }

  bool has_analytic_partials() const {
    if (!node_) return true;
    return std::visit([](const auto& n) { return analytic(n); }, node_->v);
  }

  /// True when the field contains user-supplied gradient functions (targets of the construction audit).
  bool has_user_partials() const {
    if (!node_) return false;
    return std::visit([](const auto& n) { return user_partials(n); }, node_->v);
  }

  /// Analytic partial derivative with respect to `axis`.
  ScalarField partial(int axis) const {
    if (!node_) return {};
    return std::visit([&](const auto& n) { return diff(n, axis); }, node_->v);
  }

  /// Central finite difference with h = step * max(1, |x_axis|); throws when the stencil leaves `domain`.
  ScalarField partial_fd(int axis, double step, const geometry::Box& domain, int dim) const {
    if (!node_) return {};
    ScalarField self = *this;
    auto value = [self, axis, step, domain](const geometry::Vec& x) {
      const double h = step * std::max(1.0, std::abs(x[axis]));
      geometry::Vec xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      if (!domain.contains(xp) || !domain.contains(xm))
        throw Error("finite difference stencil leaves the patch at " + x.str());
      return (self(xp) - self(xm)) / (2.0 * h);
    };
    auto d = degree();
    return ScalarField(std::make_shared<const Node>(Node{FuncNode{
        dim, std::move(value), {}, d ? std::optional<int>(std::max(*d - 1, 0)) : std::nullopt, "fd", true}}));
  }

  ScalarField scaled(double s) const {
    if (!node_ || s == 0.0) return {};
    if (s == 1.0) return *this;
    if (auto* p = std::get_if<PolyNode>(&node_->v)) return polynomial(p->p.scaled(s));
    if (auto* b = std::get_if<SeparableNode>(&node_->v))
      return separable(b->amplitude * s, b->center, b->radii, b->factors, b->mask);
    return product(constant(dim_hint(), s), *this);
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (!a.node_) return b;
    if (!b.node_) return a;
    auto* pa = std::get_if<PolyNode>(&a.node_->v);
    auto* pb = std::get_if<PolyNode>(&b.node_->v);
    if (pa && pb) return polynomial(pa->p + pb->p);
    std::vector<ScalarField> terms;
    auto push = [&](const ScalarField& f) {
      if (auto* s = std::get_if<SumNode>(&f.node_->v))
        terms.insert(terms.end(), s->terms.begin(), s->terms.end());
      else
        terms.push_back(f);
    };
    push(a);
    push(b);
    return ScalarField(std::make_shared<const Node>(Node{SumNode{std::move(terms)}}));
  }
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return a + b.scaled(-1.0); }

  friend ScalarField operator*(const ScalarField& a, const ScalarField& b) { return product(a, b); }

  std::string str() const {
    if (!node_) return "0";
    return std::visit([](const auto& n) { return describe(n); }, node_->v);
  }

 private:
  struct Node;

  struct PolyNode {
    Polynomial p;
  };
  struct SeparableNode {
    double amplitude;
    geometry::Vec center, radii;
    std::vector<Poly1> factors;
    geometry::Box mask;
  };
  struct FuncNode {
    int dim;
    Fn value;
    std::vector<Fn> gradient;
    std::optional<int> degree;
    std::string label;
    bool derived;  // produced by differencing; not a user audit target
  };
  struct SumNode {
    std::vector<ScalarField> terms;
  };
  struct ProductNode {
    std::vector<ScalarField> f;  // exactly two factors
  };
  struct Node {
    std::variant<PolyNode, SeparableNode, FuncNode, SumNode, ProductNode> v;
  };

  explicit ScalarField(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  int dim_hint() const {
    if (!node_) return geometry::kMaxDim;
    if (auto* p = std::get_if<PolyNode>(&node_->v)) return std::max(p->p.dim(), 1);
    if (auto* b = std::get_if<SeparableNode>(&node_->v)) return b->center.dim();
    if (auto* f = std::get_if<FuncNode>(&node_->v)) return f->dim;
    return geometry::kMaxDim;
  }

  static ScalarField product(const ScalarField& a, const ScalarField& b) {
    if (!a.node_ || !b.node_) return {};
    if (auto c = a.constant_value()) {
      if (*c == 1.0) return b;
      if (!std::get_if<FuncNode>(&b.node_->v) && !std::get_if<SumNode>(&b.node_->v) &&
          !std::get_if<ProductNode>(&b.node_->v))
        return b.scaled(*c);
    }
    if (auto c = b.constant_value()) {
      if (*c == 1.0) return a;
      if (!std::get_if<FuncNode>(&a.node_->v) && !std::get_if<SumNode>(&a.node_->v) &&
          !std::get_if<ProductNode>(&a.node_->v))
        return a.scaled(*c);
    }
    auto* pa = std::get_if<PolyNode>(&a.node_->v);
    auto* pb = std::get_if<PolyNode>(&b.node_->v);
    if (pa && pb) return polynomial(pa->p * pb->p);
    auto* sa = std::get_if<SeparableNode>(&a.node_->v);
    auto* sb = std::get_if<SeparableNode>(&b.node_->v);
    if (sa && sb && sa->center == sb->center && sa->radii == sb->radii && sa->mask == sb->mask) {
      std::vector<Poly1> f(sa->factors.size());
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = sa->factors[i] * sb->factors[i];
      return separable(sa->amplitude * sb->amplitude, sa->center, sa->radii, std::move(f), sa->mask);
    }
    return ScalarField(std::make_shared<const Node>(Node{ProductNode{{a, b}}}));
  }

  static double eval(const PolyNode& n, const geometry::Vec& x) { return n.p(x); }
  static double eval(const SeparableNode& n, const geometry::Vec& x) {
    if (!n.mask.contains(x)) return 0.0;
    double v = n.amplitude;
    for (std::size_t i = 0; i < n.factors.size(); ++i) {
      const int a = static_cast<int>(i);
      v *= n.factors[i]((x[a] - n.center[a]) / n.radii[a]);
    }
    return v;
  }
  static double eval(const FuncNode& n, const geometry::Vec& x) { return n.value(x); }
  static double eval(const SumNode& n, const geometry::Vec& x) {
    double s = 0;
    for (const auto& t : n.terms) s += t(x);
    return s;
  }
  static double eval(const ProductNode& n, const geometry::Vec& x) {
    const double a = n.f[0](x);
    if (a == 0.0) return 0.0;
    return a * n.f[1](x);
  }

  static std::optional<int> deg(const PolyNode& n) { return n.p.degree(); }
  static std::optional<int> deg(const SeparableNode& n) {
    int d = 0;
    for (const auto& f : n.factors) d += f.degree();
    return d;
  }
  static std::optional<int> deg(const FuncNode& n) { return n.degree; }
  static std::optional<int> deg(const SumNode& n) {
    int d = 0;
    for (const auto& t : n.terms) {
      auto e = t.degree();
      if (!e) return std::nullopt;
      d = std::max(d, *e);
    }
    return d;
  }
  static std::optional<int> deg(const ProductNode& n) {
    auto a = n.f[0].degree(), b = n.f[1].degree();
    if (!a || !b) return std::nullopt;
    return *a + *b;
  }

  static bool analytic(const PolyNode&) { return true; }
  static bool analytic(const SeparableNode&) { return true; }
  static bool analytic(const FuncNode& n) { return !n.gradient.empty(); }
  static bool analytic(const SumNode& n) {
    for (const auto& t : n.terms)
      if (!t.has_analytic_partials()) return false;
    return true;
  }
  static bool analytic(const ProductNode& n) { return n.f[0].has_analytic_partials() && n.f[1].has_analytic_partials(); }

  static bool user_partials(const PolyNode&) { return false; }
  static bool user_partials(const SeparableNode&) { return false; }
  static bool user_partials(const FuncNode& n) { return !n.gradient.empty() && !n.derived; }
  static bool user_partials(const SumNode& n) {
    for (const auto& t : n.terms)
      if (t.has_user_partials()) return true;
    return false;
  }
  static bool user_partials(const ProductNode& n) { return n.f[0].has_user_partials() || n.f[1].has_user_partials(); }

  static ScalarField diff(const PolyNode& n, int axis) { return polynomial(n.p.partial(axis)); }
  static ScalarField diff(const SeparableNode& n, int axis) {
    auto f = n.factors;
    f[axis] = f[axis].derivative().scaled(1.0 / n.radii[axis]);
    return separable(n.amplitude, n.center, n.radii, std::move(f), n.mask);
  }
  static ScalarField diff(const FuncNode& n, int axis) {
    if (n.gradient.empty()) throw Error("ScalarField: no analytic partials for field '" + n.label + "'");
    auto d = n.degree ? std::optional<int>(std::max(*n.degree - 1, 0)) : std::nullopt;
    return ScalarField(std::make_shared<const Node>(
        Node{FuncNode{n.dim, n.gradient[axis], {}, d, "d" + n.label, true}}));
  }
  static ScalarField diff(const SumNode& n, int axis) {
    ScalarField s;
    for (const auto& t : n.terms) s = s + t.partial(axis);
    return s;
  }
  static ScalarField diff(const ProductNode& n, int axis) {
    return n.f[0].partial(axis) * n.f[1] + n.f[0] * n.f[1].partial(axis);
  }

  static std::string describe(const PolyNode& n) { return n.p.str(); }
  static std::string describe(const SeparableNode& n) {
    return "bump(" + n.center.str() + ", " + n.radii.str() + ")";
  }
  static std::string describe(const FuncNode& n) { return n.label; }
  static std::string describe(const SumNode& n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.terms.size(); ++i) s += (i ? " + " : "") + n.terms[i].str();
    return s + ")";
  }
  static std::string describe(const ProductNode& n) { return n.f[0].str() + " * " + n.f[1].str(); }

  std::shared_ptr<const Node> node_;
};

}  // namespace disloc
