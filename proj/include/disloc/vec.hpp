/**
 * @file vec.hpp
 * @brief Points, tangent vectors, axis-aligned boxes and coordinate patches.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace disloc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace geometry {

inline constexpr int kMaxDim = 3;

/// A point or tangent vector of a coordinate patch (dimension 1..3).
class Vec {
 public:
  Vec() = default;

  explicit Vec(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDim) throw Error("Vec: dimension must be in 0..3");
  }

  Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    if (xs.size() > kMaxDim) throw Error("Vec: at most 3 coordinates");
    std::copy(xs.begin(), xs.end(), c_.begin());
  }

  static Vec from(const std::vector<double>& xs) {
    Vec v(static_cast<int>(xs.size()));
    std::copy(xs.begin(), xs.end(), v.c_.begin());
    return v;
  }

  static Vec unit(int dim, int axis) {
    Vec v(dim);
    v[axis] = 1.0;
    return v;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  /// Lexicographic order on coordinates; the canonical simplex key.
  friend bool operator<(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    for (int i = 0; i < a.dim_; ++i) {
      if (a.c_[i] < b.c_[i]) return true;
      if (b.c_[i] < a.c_[i]) return false;
    }
    return false;
  }

  double norm() const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
    return std::sqrt(s);
  }
  double norm_inf() const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s = std::max(s, std::abs(c_[i]));
    return s;
  }

  std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + dim_}; }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (int i = 0; i < dim_; ++i) os << (i ? ", " : "") << c_[i];
    os << ')';
    return os.str();
  }

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

/// Closed axis-aligned box [lo, hi]. Degenerate (flat) extents are allowed.
class Box {
 public:
  Box() = default;
  Box(Vec lo, Vec hi) : lo_(lo), hi_(hi) {
    if (lo.dim() != hi.dim()) throw Error("Box: corner dimensions differ");
    for (int i = 0; i < lo.dim(); ++i)
      if (!(lo[i] <= hi[i])) throw Error("Box: lo must not exceed hi in axis " + std::to_string(i));
  }

  static Box centered(const Vec& center, const Vec& radii) { return {center - radii, center + radii}; }

  int dim() const { return lo_.dim(); }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  double extent(int axis) const { return hi_[axis] - lo_[axis]; }
  Vec center() const { return (lo_ + hi_) * 0.5; }
  Vec half_widths() const { return (hi_ - lo_) * 0.5; }

  double volume() const {
    double v = 1;
    for (int i = 0; i < dim(); ++i) v *= extent(i);
    return v;
  }
  double diameter() const { return (hi_ - lo_).norm(); }

  /// True when every extent is strictly positive.
  bool solid() const {
    for (int i = 0; i < dim(); ++i)
      if (!(extent(i) > 0)) return false;
    return true;
  }

  bool contains(const Vec& x, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo_[i] - slack || x[i] > hi_[i] + slack) return false;
    return true;
  }

  /// Open-interior containment of another box.
  bool strictly_contains(const Box& b) const {
    for (int i = 0; i < dim(); ++i)
      if (!(b.lo_[i] > lo_[i] && b.hi_[i] < hi_[i])) return false;
    return true;
  }

  /// Intersection; nullopt when the boxes do not overlap in a set of positive volume.
  std::optional<Box> intersect_solid(const Box& b) const {
    Vec lo(dim()), hi(dim());
    for (int i = 0; i < dim(); ++i) {
      lo[i] = std::max(lo_[i], b.lo_[i]);
      hi[i] = std::min(hi_[i], b.hi_[i]);
      if (!(lo[i] < hi[i])) return std::nullopt;
    }
    return Box(lo, hi);
  }

  friend bool operator==(const Box&, const Box&) = default;

  std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

 private:
  Vec lo_, hi_;
};

/// A coordinate patch of R^n, n in {2,3}: the chart in which every object lives.
class Patch {
 public:
  Patch() = default;
  explicit Patch(Box bounds) : bounds_(std::move(bounds)) {
    if (dim() < 2 || dim() > 3) throw Error("Patch: dimension must be 2 or 3");
    if (!bounds_.solid()) throw Error("Patch: bounds must have positive extent in every axis");
  }

  /// The open cube (-h, h)^n.
  static Patch cube(int dim, double half_width = 1.0) {
    Vec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo[i] = -half_width;
      hi[i] = half_width;
    }
    return Patch(Box(lo, hi));
  }
  static Patch unit(int dim) {
    Vec lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) hi[i] = 1.0;
    return Patch(Box(lo, hi));
  }

  int dim() const { return bounds_.dim(); }
  const Box& bounds() const { return bounds_; }

  /// Closed containment with a slack proportional to the patch size.
  bool contains(const Vec& x) const {
    return x.dim() == dim() && bounds_.contains(x, 1e-12 * bounds_.diameter());
  }

  void require_contains(const Vec& x, const char* what) const {
    if (!contains(x)) throw Error(std::string(what) + ": point " + x.str() + " outside patch " + bounds_.str());
  }

  /// True when x lies on one of the 2n bounding hyperplanes.
  bool on_boundary(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] == bounds_.lo()[i] || x[i] == bounds_.hi()[i]) return true;
    return false;
  }

  friend bool operator==(const Patch&, const Patch&) = default;

 private:
  Box bounds_;
};

}  // namespace geometry
}  // namespace disloc
