/**
 * @file dislocation.hpp
 * @brief Dislocation density, total dislocation, torsion and Burgers bracket
 *        of frame fields, dislocation currents D = ∂T, support detection and
 *        Frank's-rule checkers.
 *
 * The checkers never assume the rules they test: every residual is obtained
 * by applying the boundary operators to the given data and probing the result.
 */
#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "disloc/currents.hpp"
#include "disloc/forms.hpp"
#include "disloc/integrate.hpp"
#include "disloc/simplex.hpp"

namespace disloc::dislocation {

using currents::Current;
using forms::Form;
using forms::MultiIndex;
using forms::TestForm;
using forms::VectorValuedForm;
using geometry::Box;
using geometry::Chain;
using geometry::Patch;
using geometry::QuadratureRule;
using geometry::Vec;

/// Tolerance ladder; every check reports the rung it used.
struct Rung {
  const char* name;
  double value;
};
inline constexpr Rung kExact{"exact", 1e-10};
inline constexpr Rung kAligned{"aligned_quadrature", 1e-8};
inline constexpr Rung kFiniteDifference{"finite_difference", 1e-5};

inline const QuadratureRule& default_rule() { return QuadratureRule::of_order(QuadratureRule::kDefaultOrder); }

// ---------------------------------------------------------------------------
// smooth theory

/// delta = d phi.
inline Form dislocation_density(const Form& phi, std::optional<double> fd_step = std::nullopt) {
  if (phi.degree() != 1) throw Error("dislocation_density: the layering form must be a 1-form");
  return forms::exterior_derivative(phi, phi.has_analytic_partials() ? std::nullopt : fd_step);
}

struct TotalDislocation {
  double boundary_integral;  // int_{∂Z} phi
  double interior_integral;  // int_Z d phi
};

/// I = int_Y phi = int_Z d phi with Y = ∂Z.
inline TotalDislocation total_dislocation(const Form& phi, const Chain& Z, const QuadratureRule& q = default_rule(),
                                          std::optional<double> fd_step = std::nullopt) {
  if (Z.degree() != 2) throw Error("total_dislocation: Z must be a 2-chain");
  const Form delta = dislocation_density(phi, fd_step);
  return {integrate_over_chain(geometry::boundary_chain(Z), phi, q), integrate_over_chain(Z, delta, q)};
}

namespace detail {

using Matrix = std::vector<std::vector<ScalarField>>;

inline void require_square(const Matrix& m, int n, const char* what) {
  if (static_cast<int>(m.size()) != n) throw Error(std::string(what) + ": expected an n x n matrix");
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw Error(std::string(what) + ": expected an n x n matrix");
  for (const auto& row : m)
    for (const auto& f : row)
      if (!f.has_analytic_partials()) throw Error(std::string(what) + ": entries need analytic partials");
}

inline Eigen::MatrixXd at(const Matrix& m, const Vec& x) {
  const int n = static_cast<int>(m.size());
  Eigen::MatrixXd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = m[r][c](x);
  return out;
}

inline std::vector<Vec> audit_points(const Patch& patch, int count) {
  std::mt19937_64 rng(0xa0d17ULL);
  std::vector<Vec> pts;
  for (int p = 0; p < count; ++p) {
    Vec x(patch.dim());
    for (int i = 0; i < patch.dim(); ++i) {
      std::uniform_real_distribution<double> u(patch.bounds().lo()[i], patch.bounds().hi()[i]);
      x[i] = u(rng);
    }
    pts.push_back(x);
  }
  return pts;
}

inline void audit_nonsingular(const Matrix& m, const Patch& patch, const char* what) {
  for (const auto& x : audit_points(patch, 16))
    if (!(std::abs(at(m, x).determinant()) > 1e-10))
      throw Error(std::string(what) + ": singular at audit point " + x.str());
}

}  // namespace detail

/// Coframe e^alpha = e^alpha_i dx^i; entry(alpha, i).
class CoframeField {
 public:
  CoframeField(const Patch& patch, detail::Matrix rows) : patch_(patch), m_(std::move(rows)) {
    detail::require_square(m_, patch.dim(), "CoframeField");
    detail::audit_nonsingular(m_, patch_, "CoframeField");
  }
  static CoframeField identity(const Patch& patch) {
    const int n = patch.dim();
    detail::Matrix m(n, std::vector<ScalarField>(n));
    for (int i = 0; i < n; ++i) m[i][i] = ScalarField::constant(n, 1.0);
    return CoframeField(patch, std::move(m));
  }

  const Patch& patch() const { return patch_; }
  int dim() const { return patch_.dim(); }
  const ScalarField& entry(int alpha, int i) const { return m_.at(alpha).at(i); }
  Eigen::MatrixXd at(const Vec& x) const { return detail::at(m_, x); }

  /// The 1-forms e^alpha.
  VectorValuedForm forms() const {
    std::vector<Form> out;
    for (int a = 0; a < dim(); ++a) {
      std::vector<std::pair<MultiIndex, ScalarField>> comps;
      for (int i = 0; i < dim(); ++i) comps.emplace_back(1u << i, m_[a][i]);
      out.emplace_back(patch_, 1, comps);
    }
    return VectorValuedForm(std::move(out));
  }

 private:
  Patch patch_;
  detail::Matrix m_;
};

/// Frame e_alpha = e^i_alpha ∂_i; entry(i, alpha), so column alpha is e_alpha.
class FrameField {
 public:
  FrameField(const Patch& patch, detail::Matrix entries) : patch_(patch), m_(std::move(entries)) {
    detail::require_square(m_, patch.dim(), "FrameField");
    detail::audit_nonsingular(m_, patch_, "FrameField");
  }
  static FrameField identity(const Patch& patch) {
    const int n = patch.dim();
    detail::Matrix m(n, std::vector<ScalarField>(n));
    for (int i = 0; i < n; ++i) m[i][i] = ScalarField::constant(n, 1.0);
    return FrameField(patch, std::move(m));
  }

  const Patch& patch() const { return patch_; }
  int dim() const { return patch_.dim(); }
  const ScalarField& entry(int i, int alpha) const { return m_.at(i).at(alpha); }
  Eigen::MatrixXd at(const Vec& x) const { return detail::at(m_, x); }
  /// d/dx^k of the matrix at x.
  Eigen::MatrixXd partial_at(int k, const Vec& x) const {
    const int n = dim();
    Eigen::MatrixXd out(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(r, c) = m_[r][c].partial(k)(x);
    return out;
  }

 private:
  Patch patch_;
  detail::Matrix m_;
};

/// max |e^alpha_i e^i_beta - delta^alpha_beta| over the audit points.
inline double duality_defect(const FrameField& ff, const CoframeField& cf) {
  if (!(ff.patch() == cf.patch())) throw Error("duality_defect: fields on different patches");
  double worst = 0;
  for (const auto& x : detail::audit_points(ff.patch(), 16)) {
    const Eigen::MatrixXd p = cf.at(x) * ff.at(x) - Eigen::MatrixXd::Identity(ff.dim(), ff.dim());
    worst = std::max(worst, p.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// tau^alpha = d e^alpha.
inline VectorValuedForm torsion(const CoframeField& cf) {
  const VectorValuedForm e = cf.forms();
  std::vector<Form> out;
  for (const auto& ea : e.entries()) out.push_back(forms::exterior_derivative(ea));
  return VectorValuedForm(std::move(out));
}

struct BurgersBracket {
  Vec component_formula;    // e^j_a ∂_j e_b - e^j_b ∂_j e_a
  Vec contraction_formula;  // (tau^s_ij e^i_a e^j_b) e_s with tau from the inverse coframe
  double discrepancy;       // relative difference of the two
  bool agree;               // discrepancy <= 1e-6
  std::optional<Vec> edge;  // n = 3: part in span(e_a, e_b)
  std::optional<Vec> screw; // n = 3: part along e_a x e_b
};

/// The Lie bracket [e_alpha, e_beta] at x, computed by two independent formulas.
inline BurgersBracket burgers_bracket(const FrameField& ff, int alpha, int beta, const Vec& x) {
  const int n = ff.dim();
  if (alpha == beta) throw Error("burgers_bracket: alpha and beta must differ");
  if (alpha < 0 || beta < 0 || alpha >= n || beta >= n) throw Error("burgers_bracket: frame index out of range");
  ff.patch().require_contains(x, "burgers_bracket");
  const Eigen::MatrixXd E = ff.at(x);
  if (!(std::abs(E.determinant()) > 1e-10)) throw Error("burgers_bracket: frame singular at " + x.str());
  std::vector<Eigen::MatrixXd> dE;
  for (int k = 0; k < n; ++k) dE.push_back(ff.partial_at(k, x));

  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b1(i) += E(j, alpha) * dE[j](i, beta) - E(j, beta) * dE[j](i, alpha);

  const Eigen::MatrixXd Theta = E.inverse();
  std::vector<Eigen::MatrixXd> dTheta;
  for (int k = 0; k < n; ++k) dTheta.push_back(-Theta * dE[k] * Theta);
  Eigen::VectorXd b2 = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n; ++s) {
    double coeff = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double tau = dTheta[j](s, i) - dTheta[i](s, j);
        coeff += tau * E(i, alpha) * E(j, beta);
      }
    b2 += coeff * E.col(s);
  }

  auto to_vec = [n](const Eigen::VectorXd& v) {
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = v(i);
    return out;
  };
  const double scale = std::max({b1.norm(), b2.norm(), 1e-300});
  const double disc = (b1 - b2).norm() / std::max(scale, 1.0);
  BurgersBracket out{to_vec(b1), to_vec(b2), disc, disc <= 1e-6, std::nullopt, std::nullopt};
  if (n == 3) {
    const Eigen::Vector3d ea = E.col(alpha), eb = E.col(beta);
    const Eigen::Vector3d w = ea.cross(eb);
    Eigen::Matrix3d basis;
    basis << ea, eb, w;
    const Eigen::Vector3d c = basis.colPivHouseholderQr().solve(Eigen::Vector3d(b1));
    out.edge = to_vec(c(0) * ea + c(1) * eb);
    out.screw = to_vec(c(2) * w);
  }
  return out;
}

struct TubeFlux {
  std::vector<double> flux1, flux2, residual;  // residual = |flux1 - flux2| per alpha
};

/// Torsion fluxes through the two lids of a tube.
inline TubeFlux tube_flux_check(const VectorValuedForm& tau, const Chain& lid1, const Chain& lid2,
                                const QuadratureRule& q = default_rule()) {
  if (tau.degree() != 2) throw Error("tube_flux_check: torsion must be 2-forms");
  if (lid1.degree() != 2 || lid2.degree() != 2) throw Error("tube_flux_check: lids must be 2-chains");
  TubeFlux out;
  for (const auto& t : tau.entries()) {
    const double f1 = integrate_over_chain(lid1, t, q), f2 = integrate_over_chain(lid2, t, q);
    out.flux1.push_back(f1);
    out.flux2.push_back(f2);
    out.residual.push_back(std::abs(f1 - f2));
  }
  return out;
}

// ---------------------------------------------------------------------------
// singular theory

struct DislocationCurrent {
  Current current;
  bool structural;  // false when the weak boundary was used
};

/// D = ∂T, structurally when a rewrite rule exists.
inline DislocationCurrent dislocation_current(const Current& T, std::optional<double> fd_step = std::nullopt) {
  if (T.degree() == 0) throw Error("dislocation_current: a 0-current has no boundary");
  try {
    return {currents::boundary_structural(T, fd_step), true};
  } catch (const Error&) {
    return {currents::boundary_weak(T), false};
  }
}

/// All unit-amplitude basis bumps of degree k centred in `support`.
inline std::vector<TestForm> basis_probes(const Patch& patch, const Box& support, int k, double amplitude = 1.0,
                                          int m = forms::kDefaultBumpPower) {
  std::vector<TestForm> out;
  for (MultiIndex I : forms::multi_indices(patch.dim(), k))
    out.push_back(forms::make_bump_testform(patch, support.center(), support.half_widths(), m, I, amplitude));
  return out;
}

struct SupportCell {
  std::array<int, geometry::kMaxDim> index{0, 0, 0};
  Box cell;
  double peak;  // largest |probe value| seen
  friend bool operator<(const SupportCell& a, const SupportCell& b) { return a.index < b.index; }
};

/// Probe support of a cell: the cell dilated by 1/8 of its width per side, kept inside the patch.
inline Box probe_box(const Patch& patch, const Box& cell) {
  const Box& pb = patch.bounds();
  Vec lo = cell.lo(), hi = cell.hi();
  for (int i = 0; i < patch.dim(); ++i) {
    const double h = cell.extent(i) / 8.0;
    const double margin = 1e-9 * pb.extent(i);
    lo[i] = std::max(lo[i] - h, pb.lo()[i] + margin);
    hi[i] = std::min(hi[i] + h, pb.hi()[i] - margin);
  }
  return Box(lo, hi);
}

/// Grid cells whose dilated bump probes see D above the zero threshold, in lexicographic order.
inline std::vector<SupportCell> detect_support(const Current& D, int resolution, double probe_amplitude = 1.0,
                                               const QuadratureRule& q = default_rule()) {
  if (resolution < 2) throw Error("detect_support: resolution must be >= 2");
  if (!(probe_amplitude > 0)) throw Error("detect_support: probe amplitude must be positive");
  const Patch& patch = D.patch();
  const int n = patch.dim();
  const Box& pb = patch.bounds();
  std::vector<SupportCell> found;
  std::array<int, geometry::kMaxDim> idx{0, 0, 0};
  for (;;) {
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      const double w = pb.extent(i) / resolution;
      lo[i] = pb.lo()[i] + w * idx[i];
      hi[i] = idx[i] + 1 == resolution ? pb.hi()[i] : pb.lo()[i] + w * (idx[i] + 1);
    }
    const Box cell(lo, hi);
    const Box support = probe_box(patch, cell);
    const double threshold = currents::zero_threshold(probe_amplitude, support);
    double peak = 0;
    for (const auto& probe : basis_probes(patch, support, D.degree(), probe_amplitude))
      peak = std::max(peak, std::abs(currents::evaluate(D, probe, q)));
    if (peak > threshold) found.push_back({idx, cell, peak});
    int j = n - 1;
    while (j >= 0 && ++idx[j] == resolution) idx[j--] = 0;
    if (j < 0) break;
  }
  std::sort(found.begin(), found.end());
  return found;
}

struct NodeCheck {
  Vec node;
  std::vector<int> signs;     // +1 toward the node, -1 away
  double signed_sum;          // sum_i a_i sign_i
  std::vector<double> probe_values;  // ∂D(gamma) per probe
  double residual;            // max |∂D(gamma) / gamma(A)|
};

namespace detail {

/// The single interior endpoint of a line chain and its sign.
inline std::pair<Vec, int> line_end(const Chain& line, const Patch& patch, std::size_t i) {
  if (line.degree() != 1) throw Error("frank_node_check: line " + std::to_string(i) + " is not a 1-chain");
  const Chain b = geometry::restrict_to_open_patch(geometry::boundary_chain(line), patch);
  std::vector<std::pair<Vec, double>> interior;
  for (const auto& [verts, a] : b.terms())
    if (!patch.on_boundary(verts[0])) interior.emplace_back(verts[0], a);
  if (interior.size() != 1 || std::abs(std::abs(interior[0].second) - 1.0) > 1e-12)
    throw Error("frank_node_check: line " + std::to_string(i) + " does not end at a single node inside the patch");
  return {interior[0].first, interior[0].second > 0 ? 1 : -1};
}

}  // namespace detail

/// Frank's node rule: ∂D for D = sum_i a_i T_{L_i}, probed by 0-forms around the node.
inline NodeCheck frank_node_check(const Patch& patch, const std::vector<std::pair<double, Chain>>& lines,
                                  std::vector<TestForm> probes = {}, const QuadratureRule& q = default_rule()) {
  if (lines.empty()) throw Error("frank_node_check: no lines");
  NodeCheck out{Vec(patch.dim()), {}, 0.0, {}, 0.0};
  std::vector<std::pair<double, Current>> terms;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto [end, sign] = detail::line_end(lines[i].second, patch, i);
    if (i == 0)
      out.node = end;
    else if (!(end == out.node))
      throw Error("frank_node_check: line " + std::to_string(i) + " does not end at the node " + out.node.str());
    out.signs.push_back(sign);
    out.signed_sum += lines[i].first * sign;
    terms.emplace_back(lines[i].first, currents::chain_current(patch, lines[i].second));
  }
  const Current D = currents::combine(patch, 1, std::move(terms));
  const Current dD = currents::boundary_structural(D);
  if (probes.empty()) {
    double r = 0.25 * patch.bounds().extent(0);
    for (int i = 0; i < patch.dim(); ++i)
      r = std::min({r, 0.5 * (out.node[i] - patch.bounds().lo()[i]), 0.5 * (patch.bounds().hi()[i] - out.node[i])});
    Vec radii(patch.dim());
    for (double scale : {1.0, 0.5, 0.25}) {
      for (int i = 0; i < patch.dim(); ++i) radii[i] = r * scale;
      probes.push_back(forms::make_bump_testform(patch, out.node, radii, forms::kDefaultBumpPower, 0u, 1.0));
    }
  }
  for (const auto& g : probes) {
    if (g.degree() != 0) throw Error("frank_node_check: probes must be 0-forms");
    const double gA = g.evaluate(out.node, {});
    if (gA == 0.0) throw Error("frank_node_check: a probe does not cover the node");
    const double v = currents::evaluate(dD, g, q);
    out.probe_values.push_back(v);
    out.residual = std::max(out.residual, std::abs(v / gA));
  }
  return out;
}

struct ConstancyCheck {
  bool consistent;
  double residual;                   // max |(T_L ⌞ du)(probe)| over probes
  double threshold;                  // zero threshold applied
  std::vector<double> probe_values;  // value of the contraction term -T_L⌞du on each probe
  Current boundary;                  // structural ∂T_{uL}
};

/// Frank's constancy rule: for D = T_{uL} with ∂L = 0 the contraction term of ∂D must vanish.
inline ConstancyCheck frank_constancy_check(const ScalarField& u, const Patch& patch, const Chain& L,
                                            std::vector<TestForm> probes = {}, bool allow_boundary = false,
                                            double tolerance = 0.0, const QuadratureRule& q = default_rule()) {
  if (L.degree() < 1) throw Error("frank_constancy_check: L must have degree >= 1");
  const Chain edge = geometry::restrict_to_open_patch(geometry::boundary_chain(L), patch);
  if (!edge.empty() && !allow_boundary)
    throw Error("frank_constancy_check: L has boundary inside the patch and no node was declared");
  const Current T = currents::weighted_chain_current(patch, L, u);
  const Current dT = currents::boundary_structural(T);
  const Form du = forms::exterior_derivative(Form::scalar(patch, u));
  const Current term = currents::contract(currents::chain_current(patch, L), du);
  const int k = L.degree() - 1;
  if (probes.empty()) {
    // bumps at simplex barycentres, small enough to stay off ∂L and inside the patch
    for (const auto& [verts, a] : L.terms()) {
      Vec c(patch.dim());
      double len = 1e300;
      for (const auto& v : verts) c += v * (1.0 / verts.size());
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j) len = std::min(len, (verts[i] - verts[j]).norm());
      double r = 0.2 * len;
      for (int i = 0; i < patch.dim(); ++i)
        r = std::min({r, 0.5 * (c[i] - patch.bounds().lo()[i]), 0.5 * (patch.bounds().hi()[i] - c[i])});
      Vec radii(patch.dim());
      for (int i = 0; i < patch.dim(); ++i) radii[i] = r;
      for (auto& p : basis_probes(patch, Box::centered(c, radii), k)) probes.push_back(std::move(p));
    }
  }
  ConstancyCheck out{true, 0.0, 0.0, {}, dT};
  for (const auto& g : probes) {
    if (g.degree() != k) throw Error("frank_constancy_check: probe degree must be deg L - 1");
    const double v = -currents::evaluate(term, g, q);
    const double thr = std::max(tolerance, currents::zero_threshold(1.0, g.support()));
    out.threshold = std::max(out.threshold, thr);
    out.probe_values.push_back(v);
    out.residual = std::max(out.residual, std::abs(v));
    if (std::abs(v) > thr) out.consistent = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// geometries of the worked examples

/// Kuhn-triangulated parallelogram origin + s e1 + t e2, oriented by (e1, e2).
inline Chain parallelogram(const Vec& origin, const Vec& e1, const Vec& e2) {
  return geometry::triangulate_parallelotope(origin, {e1, e2}, 1);
}

inline Chain segment(const Vec& from, const Vec& to) {
  Chain c(from.dim(), 1);
  c.add(geometry::OrientedSimplex({from, to}));
  return c;
}

/// {(0, x2, x3): x2 <= 0} in the cube (-1,1)^3, oriented by dx2^dx3.
inline Chain half_plane_cube() { return parallelogram(Vec{0, -1, -1}, Vec{0, 1, 0}, Vec{0, 0, 2}); }

/// Quarter planes s1 (dx2^dx3), s2 (dx1^dx2), s3 (-dx1^dx2) meeting at the origin of (-1,1)^3.
inline std::array<Chain, 3> quarter_planes() {
  return {parallelogram(Vec{0, -1, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}),
          parallelogram(Vec{0, -1, 0}, Vec{1, 0, 0}, Vec{0, 1, 0}),
          parallelogram(Vec{-1, -1, 0}, Vec{0, 1, 0}, Vec{1, 0, 0})};
}

/// a1 s1 + a2 s2 + a3 s3.
inline Chain three_quarter_planes(double a1, double a2, double a3) {
  const auto s = quarter_planes();
  return s[0].scaled(a1) + s[1].scaled(a2) + s[2].scaled(a3);
}

/// The fork lines L1 (origin to e3), L2 (e1 to origin), L3 (-e1 to origin) and the extra line L (-e2 to origin).
struct ForkLines {
  Chain L1, L2, L3, L;
};
inline ForkLines fork_lines() {
  const Vec o{0, 0, 0};
  return {segment(o, Vec{0, 0, 1}), segment(Vec{1, 0, 0}, o), segment(Vec{-1, 0, 0}, o), segment(Vec{0, -1, 0}, o)};
}

/// The x1-axis of (-1,1)^2 traversed as part of the boundary of the lower half plane (toward -x1).
inline Chain step_interface_line(const Patch& patch) {
  return segment(Vec{patch.bounds().hi()[0], 0.0}, Vec{patch.bounds().lo()[0], 0.0});
}

/// T_L for the step interface: omega -> int_L omega dx1 (a 0-current).
inline Current step_interface_line_current(const Patch& patch) {
  return currents::contract(currents::chain_current(patch, step_interface_line(patch)),
                            Form::basis(patch, forms::make_index({0})));
}

}  // namespace disloc::dislocation
