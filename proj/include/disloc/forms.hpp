/**
 * @file forms.hpp
 * @brief Differential forms on a coordinate patch: evaluation, wedge product,
 *        exterior derivative, piecewise forms and compactly supported test forms.
 *
 * A k-form stores one coefficient field per strictly increasing multi-index,
 * encoded as a bit mask over the coordinate axes (bit i <-> dx^{i+1}). Signs
 * are resolved only inside wedge() and exterior_derivative().
 */
#pragma once

#include <array>
#include <bit>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "disloc/polynomial.hpp"
#include "disloc/scalar_field.hpp"
#include "disloc/vec.hpp"

namespace disloc::forms {

using geometry::Box;
using geometry::Patch;
using geometry::Vec;

/// Strictly increasing multi-index as an axis bit mask.
using MultiIndex = unsigned;

inline int index_length(MultiIndex I) { return std::popcount(I); }

/// All increasing multi-indices of length k in dimension n, in lexicographic order.
inline std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  for (MultiIndex I = 0; I < (1u << n); ++I)
    if (index_length(I) == k) out.push_back(I);
  return out;
}

/// Multi-index from 0-based axes (any order, no repeats).
inline MultiIndex make_index(std::initializer_list<int> axes) {
  MultiIndex I = 0;
  for (int a : axes) {
    if (I & (1u << a)) throw Error("multi-index with a repeated axis");
    I |= 1u << a;
  }
  return I;
}

inline std::vector<int> axes_of(MultiIndex I) {
  std::vector<int> out;
  for (int a = 0; a < geometry::kMaxDim; ++a)
    if (I & (1u << a)) out.push_back(a);
  return out;
}

/// "dx1^dx3" style name; "1" for the empty index.
inline std::string index_name(MultiIndex I) {
  if (I == 0) return "1";
  std::string s;
  for (int a : axes_of(I)) s += (s.empty() ? "" : "^") + std::string("dx") + std::to_string(a + 1);
  return s;
}

/// Sign of dx^I ^ dx^J relative to dx^{I|J} (I, J disjoint).
inline int shuffle_sign(MultiIndex I, MultiIndex J) {
  int inversions = 0;
  for (int i : axes_of(I))
    for (int j : axes_of(J))
      if (i > j) ++inversions;
  return inversions % 2 ? -1 : 1;
}

namespace detail {

inline double minor_det(std::span<const Vec> v, const std::vector<int>& rows) {
  const int k = static_cast<int>(rows.size());
  auto m = [&](int r, int c) { return v[c][rows[r]]; };
  switch (k) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      throw Error("minor_det: unsupported size");
  }
}

}  // namespace detail

/// A smooth k-form on a patch.
class Form {
 public:
  Form() = default;

  /// The zero k-form.
  Form(const Patch& patch, int degree) : patch_(patch), degree_(degree) {
    if (degree < 0 || degree > patch.dim()) throw Error("Form: degree must lie in 0..n");
  }

  /// Builds from components; user-supplied partials are audited against finite differences.
  Form(const Patch& patch, int degree, const std::vector<std::pair<MultiIndex, ScalarField>>& components)
      : Form(patch, degree) {
    for (const auto& [I, f] : components) {
      if (index_length(I) != degree || I >= (1u << patch.dim()))
        throw Error("Form: multi-index " + index_name(I) + " does not fit a " + std::to_string(degree) + "-form");
      comps_[I] = comps_[I] + f;
    }
    audit_partials();
  }

  static Form scalar(const Patch& patch, ScalarField f) { return Form(patch, 0, {{0u, std::move(f)}}); }

  /// The constant coordinate form dx^I.
  static Form basis(const Patch& patch, MultiIndex I, double amplitude = 1.0) {
    return Form(patch, index_length(I), {{I, ScalarField::constant(patch.dim(), amplitude)}});
  }

  const Patch& patch() const { return patch_; }
  int dim() const { return patch_.dim(); }
  int degree() const { return degree_; }
  const ScalarField& component(MultiIndex I) const { return comps_.at(I); }

  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

  std::optional<int> polynomial_degree() const {
    int d = 0;
    for (const auto& c : comps_) {
      if (c.is_zero()) continue;
      auto e = c.degree();
      if (!e) return std::nullopt;
      d = std::max(d, *e);
    }
    return d;
  }

  bool has_analytic_partials() const {
    for (const auto& c : comps_)
      if (!c.has_analytic_partials()) return false;
    return true;
  }

  /// sum_I c_I(x) det(rows I of [v_1 ... v_k]).
  double evaluate(const Vec& x, std::span<const Vec> v) const {
    if (static_cast<int>(v.size()) != degree_)
      throw Error("Form::evaluate: expected " + std::to_string(degree_) + " tangent vectors");
    patch_.require_contains(x, "Form::evaluate");
    if (degree_ == 0) return comps_[0](x);
    double s = 0;
    for (MultiIndex I = 0; I < comps_.size(); ++I) {
      if (comps_[I].is_zero()) continue;
      const double det = detail::minor_det(v, axes_of(I));
      if (det != 0.0) s += comps_[I](x) * det;
    }
    return s;
  }

  double evaluate(const Vec& x, std::initializer_list<Vec> v) const {
    std::vector<Vec> vv(v);
    return evaluate(x, std::span<const Vec>(vv));
  }

  Form scaled(double s) const {
    Form out(patch_, degree_);
    for (std::size_t I = 0; I < comps_.size(); ++I) out.comps_[I] = comps_[I].scaled(s);
    return out;
  }

  friend Form operator+(const Form& a, const Form& b) {
    a.require_compatible(b);
    Form out(a.patch_, a.degree_);
    for (std::size_t I = 0; I < a.comps_.size(); ++I) out.comps_[I] = a.comps_[I] + b.comps_[I];
    return out;
  }
  friend Form operator-(const Form& a, const Form& b) { return a + b.scaled(-1.0); }

  std::string str() const {
    std::string s;
    for (MultiIndex I = 0; I < comps_.size(); ++I) {
      if (comps_[I].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + comps_[I].str() + ")";
      if (I != 0) s += " " + index_name(I);
    }
    return s.empty() ? "0" : s;
  }

  void require_compatible(const Form& b) const {
    if (!(patch_ == b.patch_)) throw Error("Form: forms live on different patches");
    if (degree_ != b.degree_) throw Error("Form: degree mismatch");
  }

 private:
  friend Form wedge(const Form&, const Form&);
  friend Form exterior_derivative(const Form&, std::optional<double>);

  void audit_partials() const {
    std::mt19937_64 rng(0x5eedULL);
    const Box& b = patch_.bounds();
    for (const auto& c : comps_) {
      if (!c.has_user_partials()) continue;
      for (int p = 0; p < 16; ++p) {
        Vec x(dim());
        for (int i = 0; i < dim(); ++i) {
          std::uniform_real_distribution<double> u(b.lo()[i] + 1e-3 * b.extent(i), b.hi()[i] - 1e-3 * b.extent(i));
          x[i] = u(rng);
        }
        for (int axis = 0; axis < dim(); ++axis) {
          const double analytic = c.partial(axis)(x);
          const double fd = c.partial_fd(axis, 1e-5, b, dim())(x);
          if (std::abs(analytic - fd) > 1e-5 * std::max(1.0, std::abs(analytic)))
            throw Error("Form: supplied partial d/dx" + std::to_string(axis + 1) + " of '" + c.str() +
                        "' disagrees with finite differences at " + x.str());
        }
      }
    }
  }

  Patch patch_;
  int degree_ = 0;
  std::array<ScalarField, 1u << geometry::kMaxDim> comps_{};
};

/// Exterior product; components by signed shuffle of multi-indices.
inline Form wedge(const Form& a, const Form& b) {
  if (!(a.patch_ == b.patch_)) throw Error("wedge: forms live on different patches");
  const int p = a.degree_, q = b.degree_;
  if (p + q > a.dim()) throw Error("wedge: degree " + std::to_string(p + q) + " exceeds the patch dimension");
  Form out(a.patch_, p + q);
  for (MultiIndex I = 0; I < a.comps_.size(); ++I) {
    if (a.comps_[I].is_zero()) continue;
    for (MultiIndex J = 0; J < b.comps_.size(); ++J) {
      if (b.comps_[J].is_zero() || (I & J)) continue;
      const ScalarField term = a.comps_[I] * b.comps_[J];
      out.comps_[I | J] = out.comps_[I | J] + (shuffle_sign(I, J) > 0 ? term : term.scaled(-1.0));
    }
  }
  return out;
}

/// d(sum_I c_I dx^I) = sum_I sum_j d_j c_I dx^j ^ dx^I. Uses analytic partials when every
/// component has them, else central differences with base step `fd_step`.
inline Form exterior_derivative(const Form& w, std::optional<double> fd_step = std::nullopt) {
  const int n = w.dim();
  if (w.degree_ >= n) throw Error("exterior_derivative: the form already has top degree");
  const bool analytic = w.has_analytic_partials();
  if (!analytic && !fd_step)
    throw Error("exterior_derivative: no analytic partials; a finite-difference step is required");
  Form out(w.patch_, w.degree_ + 1);
  for (MultiIndex I = 0; I < w.comps_.size(); ++I) {
    const ScalarField& c = w.comps_[I];
    if (c.is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      if (I & (1u << j)) continue;
      ScalarField dj = analytic ? c.partial(j) : c.partial_fd(j, *fd_step, w.patch_.bounds(), n);
      if (dj.is_zero()) continue;
      const int before = std::popcount(I & ((1u << j) - 1u));
      out.comps_[I | (1u << j)] = out.comps_[I | (1u << j)] + (before % 2 ? dj.scaled(-1.0) : dj);
    }
  }
  return out;
}

/// Default finite-difference base step.
inline constexpr double kDefaultFdStep = 1e-5;

/// A form with compact support inside an axis-aligned box strictly inside the patch.
class TestForm {
 public:
  TestForm(Form form, Box support) : form_(std::move(form)), support_(std::move(support)) {
    if (!support_.solid()) throw Error("TestForm: support box must have positive extent");
    if (!form_.patch().bounds().strictly_contains(support_))
      throw Error("TestForm: support " + support_.str() + " must lie strictly inside the patch");
  }

  const Form& form() const { return form_; }
  const Box& support() const { return support_; }
  const Patch& patch() const { return form_.patch(); }
  int degree() const { return form_.degree(); }
  std::optional<int> polynomial_degree() const { return form_.polynomial_degree(); }
  double evaluate(const Vec& x, std::span<const Vec> v) const { return form_.evaluate(x, v); }
  double evaluate(const Vec& x, std::initializer_list<Vec> v) const { return form_.evaluate(x, v); }

 private:
  Form form_;
  Box support_;
};

/// Default bump exponent: (1 - t^2)^4 is C^3 across the support boundary.
inline constexpr int kDefaultBumpPower = 4;

/// sum over the pattern of amplitude * prod_i (1 - t_i^2)^m dx^I, t_i = (x_i - c_i) / r_i.
inline TestForm make_bump_testform(const Patch& patch, const Vec& center, const Vec& radii, int m,
                                   const std::vector<std::pair<MultiIndex, double>>& pattern) {
  if (m < 2) throw Error("make_bump_testform: m must be >= 2 for C^1 test forms");
  if (center.dim() != patch.dim() || radii.dim() != patch.dim())
    throw Error("make_bump_testform: center/radii dimension differs from the patch");
  const Box support = Box::centered(center, radii);
  if (!patch.bounds().strictly_contains(support))
    throw Error("make_bump_testform: support " + support.str() + " touches or leaves the patch boundary");
  if (pattern.empty()) throw Error("make_bump_testform: empty component pattern");
  const int k = index_length(pattern.front().first);
  std::vector<std::pair<MultiIndex, ScalarField>> comps;
  const std::vector<Poly1> factors(patch.dim(), Poly1::bump_profile(m));
  for (const auto& [I, amp] : pattern) {
    if (index_length(I) != k) throw Error("make_bump_testform: pattern mixes degrees");
    comps.emplace_back(I, ScalarField::separable(amp, center, radii, factors, support));
  }
  return TestForm(Form(patch, k, comps), support);
}

inline TestForm make_bump_testform(const Patch& patch, const Vec& center, const Vec& radii, int m, MultiIndex I,
                                   double amplitude) {
  return make_bump_testform(patch, center, radii, m, {{I, amplitude}});
}

inline TestForm exterior_derivative(const TestForm& w) {
  return TestForm(exterior_derivative(w.form()), w.support());
}

/// alpha ^ w keeps the support of w.
inline TestForm wedge(const Form& alpha, const TestForm& w) { return TestForm(wedge(alpha, w.form()), w.support()); }

/// One piece of a piecewise form.
struct FormPiece {
  Box region;
  Form form;
};

/// A form that is smooth on each of finitely many boxes tiling the patch.
class PiecewiseForm {
 public:
  PiecewiseForm(const Patch& patch, std::vector<FormPiece> pieces) : patch_(patch), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error("PiecewiseForm: no pieces");
    degree_ = pieces_.front().form.degree();
    double covered = 0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (p.form.degree() != degree_) throw Error("PiecewiseForm: pieces differ in degree");
      if (!(p.form.patch() == patch_)) throw Error("PiecewiseForm: piece form on another patch");
      if (!p.region.solid() || !patch_.bounds().contains(p.region.lo()) || !patch_.bounds().contains(p.region.hi()))
        throw Error("PiecewiseForm: piece region must be a solid box inside the patch");
      for (std::size_t j = 0; j < i; ++j)
        if (p.region.intersect_solid(pieces_[j].region))
          throw Error("PiecewiseForm: piece regions overlap in positive measure");
      covered += p.region.volume();
    }
    const double total = patch_.bounds().volume();
    if (std::abs(covered - total) > 1e-12 * total) throw Error("PiecewiseForm: pieces do not cover the patch");
  }

  const Patch& patch() const { return patch_; }
  int degree() const { return degree_; }
  const std::vector<FormPiece>& pieces() const { return pieces_; }

  /// First piece whose closed region contains x.
  const FormPiece& piece_at(const Vec& x) const {
    for (const auto& p : pieces_)
      if (p.region.contains(x)) return p;
    throw Error("PiecewiseForm: no piece contains " + x.str());
  }

  double evaluate(const Vec& x, std::span<const Vec> v) const { return piece_at(x).form.evaluate(x, v); }

  std::optional<int> polynomial_degree() const {
    int d = 0;
    for (const auto& p : pieces_) {
      auto e = p.form.polynomial_degree();
      if (!e) return std::nullopt;
      d = std::max(d, *e);
    }
    return d;
  }

 private:
  Patch patch_;
  std::vector<FormPiece> pieces_;
  int degree_ = 0;
};

/// The part of the patch where x_axis >= offset (upper) or x_axis <= offset (lower).
inline Box half_space(const Patch& patch, int axis, double offset, bool upper) {
  Vec lo = patch.bounds().lo(), hi = patch.bounds().hi();
  if (!(offset > lo[axis] && offset < hi[axis])) throw Error("half_space: the plane does not cut the patch");
  if (upper)
    lo[axis] = offset;
  else
    hi[axis] = offset;
  return Box(lo, hi);
}

/// Layering dx^1 for x^2 < 0 and a dx^1 for x^2 >= 0.
inline PiecewiseForm step_interface_form(const Patch& patch, double a) {
  if (!(a > 0)) throw Error("step_interface: the density ratio a must be positive");
  const Form dx1 = Form::basis(patch, make_index({0}));
  return PiecewiseForm(patch, {{half_space(patch, 1, 0.0, false), dx1}, {half_space(patch, 1, 0.0, true), dx1.scaled(a)}});
}

/// n forms of common degree indexed by alpha = 1..n.
class VectorValuedForm {
 public:
  explicit VectorValuedForm(std::vector<Form> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("VectorValuedForm: no entries");
    for (const auto& e : entries_) entries_.front().require_compatible(e);
  }
  std::size_t size() const { return entries_.size(); }
  int degree() const { return entries_.front().degree(); }
  const Form& operator[](std::size_t alpha) const { return entries_.at(alpha); }
  const std::vector<Form>& entries() const { return entries_; }

 private:
  std::vector<Form> entries_;
};

}  // namespace disloc::forms
