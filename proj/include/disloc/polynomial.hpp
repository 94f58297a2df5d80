/**
 * @file polynomial.hpp
 * @brief Dense univariate and sparse multivariate polynomials with exact
 *        differentiation; the coefficient fields of every polynomial form.
 */
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "disloc/vec.hpp"

namespace disloc {

/// Univariate polynomial sum_k c[k] t^k.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  /// (1 - t^2)^m, the bump profile.
  static Poly1 bump_profile(int m) {
    Poly1 base({1.0, 0.0, -1.0});
    Poly1 out({1.0});
    for (int i = 0; i < m; ++i) out = out * base;
    return out;
  }

  int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }

  double operator()(double t) const {
    double s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + *it;
    return s;
  }

  Poly1 derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly1(std::move(d));
  }

  Poly1 scaled(double s) const {
    auto c = c_;
    for (auto& x : c) x *= s;
    return Poly1(std::move(c));
  }

  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(c));
  }

  friend bool operator==(const Poly1&, const Poly1&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

/// Exponent vector of a monomial x1^e1 x2^e2 x3^e3.
using Exponents = std::array<int, geometry::kMaxDim>;

/// Sparse multivariate polynomial in the chart coordinates of an n-dimensional patch.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, double c) {
    Polynomial p(dim);
    p.add_term({0, 0, 0}, c);
    return p;
  }
  /// The coordinate function x^axis (0-based axis).
  static Polynomial coordinate(int dim, int axis) {
    Polynomial p(dim);
    Exponents e{0, 0, 0};
    e[axis] = 1;
    p.add_term(e, 1.0);
    return p;
  }

  int dim() const { return dim_; }

  void add_term(Exponents e, double coeff) {
    for (int i = dim_; i < geometry::kMaxDim; ++i)
      if (e[i] != 0) throw Error("Polynomial: exponent on a coordinate beyond the patch dimension");
    for (int i = 0; i < geometry::kMaxDim; ++i)
      if (e[i] < 0) throw Error("Polynomial: negative exponent");
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(e, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  const std::map<Exponents, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
  }

  double operator()(const geometry::Vec& x) const {
    double s = 0;
    for (const auto& [e, c] : terms_) {
      double m = c;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[i]; ++k) m *= x[i];
      s += m;
    }
    return s;
  }

  Polynomial partial(int axis) const {
    Polynomial p(dim_);
    for (const auto& [e, c] : terms_) {
      if (e[axis] == 0) continue;
      Exponents f = e;
      f[axis] -= 1;
      p.add_term(f, c * static_cast<double>(e[axis]));
    }
    return p;
  }

  Polynomial scaled(double s) const {
    Polynomial p(dim_);
    for (const auto& [e, c] : terms_) p.add_term(e, c * s);
    return p;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial p = a;
    p.dim_ = std::max(a.dim_, b.dim_);
    for (const auto& [e, c] : b.terms_) p.add_term(e, c);
    return p;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p(std::max(a.dim_, b.dim_));
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_)
        p.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
    return p;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c;
      for (int i = 0; i < dim_; ++i) {
        if (e[i] == 0) continue;
        os << "*x" << (i + 1);
        if (e[i] > 1) os << '^' << e[i];
      }
    }
    return os.str();
  }

 private:
  int dim_ = 0;
  std::map<Exponents, double> terms_;
};

}  // namespace disloc
