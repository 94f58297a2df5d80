/**
 * @file simplex.hpp
 * @brief Oriented simplices, real chains, the simplicial boundary operator,
 *        Kuhn triangulations and exact clipping of simplices against boxes.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "disloc/quadrature.hpp"
#include "disloc/vec.hpp"

namespace disloc::geometry {

namespace detail {

/// Gram volume of the parallelotope spanned by the edge vectors v_i - v_0.
inline double parallelotope_volume(const std::vector<Vec>& v) {
  const int k = static_cast<int>(v.size()) - 1;
  if (k <= 0) return 1.0;
  const int n = v[0].dim();
  Eigen::MatrixXd g(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = v[j + 1][i] - v[0][i];
  const double det = (g.transpose() * g).determinant();
  return std::sqrt(std::max(det, 0.0));
}

inline double bbox_diameter(const std::vector<Vec>& v) {
  Vec lo = v[0], hi = v[0];
  for (const auto& x : v)
    for (int i = 0; i < x.dim(); ++i) {
      lo[i] = std::min(lo[i], x[i]);
      hi[i] = std::max(hi[i], x[i]);
    }
  return (hi - lo).norm();
}

/// Sort vertices lexicographically; returns the permutation parity (+1 / -1).
inline int sort_with_parity(std::vector<Vec>& v) {
  int parity = 1;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
      std::swap(v[j], v[j - 1]);
      parity = -parity;
    }
  return parity;
}

}  // namespace detail

/// A k-simplex given by k+1 ordered vertices and an orientation sign relative to that order.
class OrientedSimplex {
 public:
  OrientedSimplex(std::vector<Vec> vertices, int orientation = 1)
      : vertices_(std::move(vertices)), orientation_(orientation) {
    if (vertices_.empty()) throw Error("OrientedSimplex: needs at least one vertex");
    if (orientation_ != 1 && orientation_ != -1) throw Error("OrientedSimplex: orientation must be +1 or -1");
    const int n = vertices_[0].dim();
    for (const auto& x : vertices_)
      if (x.dim() != n) throw Error("OrientedSimplex: vertices of mixed dimension");
    const int k = dim();
    if (k > n) throw Error("OrientedSimplex: simplex dimension exceeds ambient dimension");
    if (k >= 1) {
      const double diam = detail::bbox_diameter(vertices_);
      const double vol = detail::parallelotope_volume(vertices_) / detail::factorial(k);
      if (!(vol >= 1e-12 * std::pow(diam, k)))
        throw Error("OrientedSimplex: degenerate simplex (vertices not affinely independent)");
    }
  }

  int dim() const { return static_cast<int>(vertices_.size()) - 1; }
  int ambient_dim() const { return vertices_[0].dim(); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  int orientation() const { return orientation_; }

  double volume() const { return detail::parallelotope_volume(vertices_) / detail::factorial(dim()); }

  OrientedSimplex reversed() const { return {vertices_, -orientation_}; }

 private:
  std::vector<Vec> vertices_;
  int orientation_;
};

/// Finite formal sum of oriented k-simplices with real coefficients.
///
/// Simplices are keyed by their lexicographically sorted vertex list; the
/// permutation parity of the sort is folded into the coefficient, so a simplex
/// and its reversal can never be stored side by side.
class Chain {
 public:
  using Key = std::vector<Vec>;

  Chain() = default;
  Chain(int ambient_dim, int degree) : ambient_dim_(ambient_dim), degree_(degree) {
    if (degree < 0 || degree > ambient_dim) throw Error("Chain: degree must lie in 0..ambient dimension");
  }

  int degree() const { return degree_; }
  int ambient_dim() const { return ambient_dim_; }
  const std::map<Key, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const OrientedSimplex& s, double coeff = 1.0) {
    if (s.dim() != degree_) throw Error("Chain: simplex dimension differs from chain degree");
    if (s.ambient_dim() != ambient_dim_) throw Error("Chain: simplex ambient dimension differs");
    Key key = s.vertices();
    const int parity = detail::sort_with_parity(key);
    add_canonical(std::move(key), coeff * parity * s.orientation());
  }

  /// Adds a term whose vertex list is already sorted.
  void add_canonical(Key key, double coeff) {
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
    if (inserted) return;
    const double before = it->second;
    it->second += coeff;
    if (std::abs(it->second) <= 1e-14 * (std::abs(before) + std::abs(coeff))) terms_.erase(it);
  }

  Chain scaled(double s) const {
    Chain c(ambient_dim_, degree_);
    if (s == 0.0) return c;
    for (const auto& [k, a] : terms_) c.terms_.emplace(k, a * s);
    return c;
  }

  Chain& operator+=(const Chain& o) {
    if (o.degree_ != degree_ || o.ambient_dim_ != ambient_dim_) throw Error("Chain: adding chains of different degree");
    for (const auto& [k, a] : o.terms_) add_canonical(k, a);
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(const Chain& a, const Chain& b) { return a + b.scaled(-1.0); }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.degree_ == b.degree_ && a.ambient_dim_ == b.ambient_dim_ && a.terms_ == b.terms_;
  }

  /// Sum of |coefficient| * k-volume.
  double mass() const {
    double m = 0;
    for (const auto& [k, a] : terms_) m += std::abs(a) * detail::parallelotope_volume(k) / detail::factorial(degree_);
    return m;
  }

 private:
  int ambient_dim_ = 0;
  int degree_ = 0;
  std::map<Key, double> terms_;
};

/// Simplicial boundary: alternating-sign face expansion, shared faces cancel.
inline Chain boundary_chain(const Chain& c) {
  if (c.degree() == 0) throw Error("boundary_chain: no boundary for 0-chains");
  Chain out(c.ambient_dim(), c.degree() - 1);
  for (const auto& [verts, a] : c.terms()) {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      Chain::Key face;
      face.reserve(verts.size() - 1);
      for (std::size_t j = 0; j < verts.size(); ++j)
        if (j != i) face.push_back(verts[j]);
      out.add_canonical(std::move(face), (i % 2 == 0) ? a : -a);
    }
  }
  return out;
}

/// Drops simplices lying entirely in one bounding hyperplane of the patch.
inline Chain restrict_to_open_patch(const Chain& c, const Patch& patch) {
  Chain out(c.ambient_dim(), c.degree());
  const Box& b = patch.bounds();
  for (const auto& [verts, a] : c.terms()) {
    bool on_face = false;
    for (int axis = 0; axis < patch.dim() && !on_face; ++axis) {
      for (double bound : {b.lo()[axis], b.hi()[axis]}) {
        bool all = std::all_of(verts.begin(), verts.end(), [&](const Vec& x) { return x[axis] == bound; });
        if (all) {
          on_face = true;
          break;
        }
      }
    }
    if (!on_face) out.add_canonical(verts, a);
  }
  return out;
}

/// Kuhn triangulation of the parallelotope origin + sum t_i edges_i, t in [0,1]^k,
/// positively oriented with respect to the ordered edge vectors.
inline Chain triangulate_parallelotope(const Vec& origin, const std::vector<Vec>& edges, int resolution) {
  const int k = static_cast<int>(edges.size());
  const int n = origin.dim();
  if (resolution < 1) throw Error("triangulate: resolution must be >= 1");
  if (k < 1 || k > n) throw Error("triangulate: need 1..n edge vectors");
  Chain chain(n, k);
  auto point = [&](const std::array<int, kMaxDim>& idx) {
    Vec x = origin;
    for (int j = 0; j < k; ++j) {
      const double t = idx[j] == resolution ? 1.0 : static_cast<double>(idx[j]) / resolution;
      x += edges[j] * t;
    }
    return x;
  };
  std::vector<int> perm(k);
  std::array<int, kMaxDim> cell{0, 0, 0};
  for (;;) {
    for (int j = 0; j < k; ++j) perm[j] = j;
    do {
      int sign = 1;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          if (perm[a] > perm[b]) sign = -sign;
      std::vector<Vec> verts;
      auto idx = cell;
      verts.push_back(point(idx));
      for (int j = 0; j < k; ++j) {
        ++idx[perm[j]];
        verts.push_back(point(idx));
      }
      chain.add(OrientedSimplex(std::move(verts), sign));
    } while (std::next_permutation(perm.begin(), perm.end()));
    int j = k - 1;
    while (j >= 0 && ++cell[j] == resolution) cell[j--] = 0;
    if (j < 0) break;
  }
  return chain;
}

/// Positively oriented simplicial decomposition of a solid box (Kuhn, k! simplices per cell).
inline Chain triangulate_box(const Box& region, int resolution) {
  if (!region.solid()) throw Error("triangulate_box: empty region " + region.str());
  std::vector<Vec> edges;
  for (int i = 0; i < region.dim(); ++i) edges.push_back(Vec::unit(region.dim(), i) * region.extent(i));
  return triangulate_parallelotope(region.lo(), edges, resolution);
}

namespace detail {

struct ClipVertex {
  Vec x;
  std::vector<int> support;  // parent vertices with possibly nonzero barycentric weight
  bool on_plane = false;
};

inline int affine_rank(const std::vector<ClipVertex>& v, const std::vector<int>& ids) {
  if (ids.size() <= 1) return 0;
  const int n = v[ids[0]].x.dim();
  Eigen::MatrixXd m(n, static_cast<int>(ids.size()) - 1);
  for (std::size_t j = 1; j < ids.size(); ++j)
    for (int i = 0; i < n; ++i) m(i, static_cast<int>(j) - 1) = v[ids[j]].x[i] - v[ids[0]].x[i];
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

/// Pulling triangulation of a convex polytope of dimension m whose facets are cut
/// out by the constraints lambda_l = 0 (l < nparent) and d = 0.
inline std::vector<std::vector<int>> triangulate_convex(const std::vector<ClipVertex>& v, const std::vector<int>& ids,
                                                        int m, int nparent) {
  if (static_cast<int>(ids.size()) == m + 1) return {ids};
  std::vector<std::vector<int>> out;
  const int w0 = ids[0];
  std::set<std::vector<int>> seen;
  for (int c = 0; c <= nparent; ++c) {
    auto holds = [&](int id) {
      if (c == nparent) return v[id].on_plane;
      const auto& s = v[id].support;
      return std::find(s.begin(), s.end(), c) == s.end();
    };
    if (holds(w0)) continue;
    std::vector<int> facet;
    for (int id : ids)
      if (holds(id)) facet.push_back(id);
    if (static_cast<int>(facet.size()) < m) continue;
    if (affine_rank(v, facet) != m - 1) continue;
    if (!seen.insert(facet).second) continue;
    for (auto& sub : triangulate_convex(v, facet, m - 1, nparent)) {
      sub.insert(sub.begin(), w0);
      out.push_back(std::move(sub));
    }
  }
  return out;
}

/// Orientation of `piece` relative to `parent` (both k-simplices in the same affine k-plane).
inline double relative_orientation(const std::vector<Vec>& parent, const std::vector<Vec>& piece) {
  const int k = static_cast<int>(parent.size()) - 1;
  const int n = parent[0].dim();
  Eigen::MatrixXd g(n, k), p(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) {
      g(i, j) = parent[j + 1][i] - parent[0][i];
      p(i, j) = piece[j + 1][i] - piece[0][i];
    }
  Eigen::MatrixXd c = g.colPivHouseholderQr().solve(p);
  return c.determinant();
}

/// Part of the simplex where the affine function with vertex values d is >= 0.
inline std::vector<std::vector<Vec>> clip_by_halfspace(const std::vector<Vec>& simplex, const std::vector<double>& d) {
  const int k = static_cast<int>(simplex.size()) - 1;
  double scale = 0;
  for (double x : d) scale = std::max(scale, std::abs(x));
  const double eps = 1e-13 * std::max(scale, bbox_diameter(simplex));
  bool any_pos = false, any_neg = false;
  for (double x : d) {
    any_pos |= x > eps;
    any_neg |= x < -eps;
  }
  if (!any_neg) return {simplex};
  if (!any_pos) return {};
  std::vector<ClipVertex> verts;
  for (int i = 0; i <= k; ++i)
    if (d[i] >= -eps) verts.push_back({simplex[i], {i}, std::abs(d[i]) <= eps});
  for (int i = 0; i <= k; ++i) {
    if (!(d[i] > eps)) continue;
    for (int j = 0; j <= k; ++j) {
      if (!(d[j] < -eps)) continue;
      const double t = d[i] / (d[i] - d[j]);
      verts.push_back({simplex[i] + (simplex[j] - simplex[i]) * t, {i, j}, true});
    }
  }
  std::vector<int> ids(verts.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::vector<std::vector<Vec>> out;
  for (const auto& tri : triangulate_convex(verts, ids, k, k + 1)) {
    std::vector<Vec> piece;
    for (int id : tri) piece.push_back(verts[id].x);
    const double o = relative_orientation(simplex, piece);
    if (std::abs(o) < 1e-14) continue;
    if (o < 0) std::swap(piece[0], piece[1]);
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace detail

/// Exact decomposition of simplex ∩ box into simplices carrying the simplex's orientation.
inline std::vector<std::vector<Vec>> clip_simplex_to_box(const std::vector<Vec>& simplex, const Box& box) {
  const int n = simplex[0].dim();
  bool inside = true;
  for (int a = 0; a < n; ++a) {
    double lo = simplex[0][a], hi = simplex[0][a];
    for (const auto& x : simplex) {
      lo = std::min(lo, x[a]);
      hi = std::max(hi, x[a]);
    }
    if (hi < box.lo()[a] || lo > box.hi()[a]) return {};
    if (lo < box.lo()[a] || hi > box.hi()[a]) inside = false;
  }
  if (inside) return {simplex};
  if (simplex.size() == 1) return {};
  std::vector<std::vector<Vec>> pieces{simplex};
  for (int a = 0; a < n; ++a) {
    for (int side = 0; side < 2; ++side) {
      std::vector<std::vector<Vec>> next;
      for (const auto& s : pieces) {
        std::vector<double> d;
        for (const auto& x : s) d.push_back(side == 0 ? x[a] - box.lo()[a] : box.hi()[a] - x[a]);
        for (auto& p : detail::clip_by_halfspace(s, d)) next.push_back(std::move(p));
      }
      pieces = std::move(next);
    }
  }
  return pieces;
}

/// The chain c restricted to a box: every simplex replaced by its exact clipped pieces.
inline Chain clip_chain_to_box(const Chain& c, const Box& box) {
  Chain out(c.ambient_dim(), c.degree());
  for (const auto& [verts, a] : c.terms()) {
    for (auto piece : clip_simplex_to_box(verts, box)) {
      const int k = static_cast<int>(piece.size()) - 1;
      if (k > 0 && detail::parallelotope_volume(piece) < 1e-12 * std::pow(detail::bbox_diameter(piece), k)) continue;
      const int parity = detail::sort_with_parity(piece);
      out.add_canonical(std::move(piece), a * parity);
    }
  }
  return out;
}

}  // namespace disloc::geometry
