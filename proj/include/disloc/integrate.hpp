/**
 * @file integrate.hpp
 * @brief Pairing of chains with forms by simplex quadrature.
 */
#pragma once

#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "disloc/forms.hpp"
#include "disloc/quadrature.hpp"
#include "disloc/simplex.hpp"

namespace disloc {

/// Anything that evaluates like a k-form.
template <class F>
concept KFormLike = requires(const F& f, const geometry::Vec& x, std::span<const geometry::Vec> v) {
  { f.degree() } -> std::convertible_to<int>;
  { f.evaluate(x, v) } -> std::convertible_to<double>;
  { f.polynomial_degree() } -> std::convertible_to<std::optional<int>>;
};

namespace detail {

/// (1/k!) sum_q w_q f(x_q)(v_1..v_k) on one simplex, k = vertices.size() - 1.
template <KFormLike F>
double integrate_simplex(const std::vector<geometry::Vec>& verts, const F& form, const geometry::SimplexRule& rule) {
  const int k = static_cast<int>(verts.size()) - 1;
  if (k == 0) return form.evaluate(verts[0], {});
  std::vector<geometry::Vec> tangents;
  tangents.reserve(k);
  for (int j = 1; j <= k; ++j) tangents.push_back(verts[j] - verts[0]);
  double sum = 0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    geometry::Vec x = verts[0];
    for (int j = 0; j < k; ++j) x += tangents[j] * rule.nodes[q][j];
    sum += rule.weights[q] * form.evaluate(x, tangents);
  }
  return sum / geometry::detail::factorial(k);
}

}  // namespace detail

/// sum_p a_p int_{s_p} form, optionally restricted to `clip` by exact simplex clipping.
///
/// The rule's order is a floor: integrands of known polynomial degree are integrated
/// with a rule exact for that degree.
template <KFormLike F>
double integrate_over_chain(const geometry::Chain& chain, const F& form, const geometry::QuadratureRule& rule,
                            const geometry::Box* clip = nullptr) {
  if (form.degree() != chain.degree())
    throw Error("integrate_over_chain: form degree " + std::to_string(form.degree()) + " differs from chain degree " +
                std::to_string(chain.degree()));
  const auto pd = form.polynomial_degree();
  const geometry::QuadratureRule& q =
      pd && *pd > rule.order() ? geometry::QuadratureRule::of_order(*pd) : rule;
  const geometry::SimplexRule& srule = q.simplex(chain.degree());
  double total = 0;
  std::size_t id = 0;
  for (const auto& [verts, a] : chain.terms()) {
    try {
      if (!clip) {
        total += a * detail::integrate_simplex(verts, form, srule);
      } else {
        for (const auto& piece : geometry::clip_simplex_to_box(verts, *clip))
          total += a * detail::integrate_simplex(piece, form, srule);
      }
    } catch (const Error& e) {
      std::string where;
      for (const auto& v : verts) where += v.str();
      throw Error("integrate_over_chain: simplex #" + std::to_string(id) + " " + where + ": " + e.what());
    }
    ++id;
  }
  return total;
}

}  // namespace disloc
