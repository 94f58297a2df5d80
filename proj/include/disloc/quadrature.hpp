/**
 * @file quadrature.hpp
 * @brief Conical-product quadrature on reference simplices of dimension 0..3.
 *
 * The reference k-simplex is {lambda_i >= 0, sum lambda_i <= 1} in R^k. Nodes
 * are Gauss-Legendre tensor points mapped through the collapsed (Duffy)
 * coordinates lambda_j = u_j prod_{i<j} (1 - u_i); the Jacobian is folded into
 * the weights, which are normalised to sum to one. Every rule is certified at
 * construction against the closed-form Dirichlet integrals of all monomials up
 * to its order.
 */
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "disloc/vec.hpp"

namespace disloc::geometry {

/// Nodes (barycentric lambda_1..lambda_k) and normalised weights on the reference k-simplex.
struct SimplexRule {
  int dim = 0;
  std::vector<std::array<double, kMaxDim>> nodes;
  std::vector<double> weights;
};

namespace detail {

/// Gauss-Legendre nodes and weights on [0, 1].
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = 0.5 * (1.0 - z);
    x[n - 1 - i] = 0.5 * (1.0 + z);
    w[i] = w[n - 1 - i] = 0.5 * wi;
  }
}

inline double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline SimplexRule conical_product(int k, int order) {
  SimplexRule rule;
  rule.dim = k;
  if (k == 0) {
    rule.nodes.push_back({0, 0, 0});
    rule.weights.push_back(1.0);
    return rule;
  }
  const int n = (order + k) / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre_unit(n, x, w);
  const double norm = factorial(k);
  std::array<int, kMaxDim> idx{0, 0, 0};
  for (;;) {
    std::array<double, kMaxDim> lam{0, 0, 0};
    double weight = norm;
    double remaining = 1.0;
    for (int j = 0; j < k; ++j) {
      double u = x[idx[j]];
      lam[j] = u * remaining;
      weight *= w[idx[j]] * std::pow(1.0 - u, k - 1 - j);
      remaining *= (1.0 - u);
    }
    rule.nodes.push_back(lam);
    rule.weights.push_back(weight);
    int j = k - 1;
    while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
  }
  return rule;
}

/// Normalised integral of lambda^alpha over the reference k-simplex: k! alpha! / (|alpha| + k)!.
inline double dirichlet_moment(int k, const std::array<int, kMaxDim>& alpha) {
  int total = 0;
  double num = factorial(k);
  for (int j = 0; j < k; ++j) {
    num *= factorial(alpha[j]);
    total += alpha[j];
  }
  return num / factorial(total + k);
}

inline void certify(const SimplexRule& rule, int order) {
  const int k = rule.dim;
  const std::size_t nq = rule.nodes.size();
  // powers[(q * k + j) * (order + 1) + p] = lambda_j(q)^p
  std::vector<double> powers(nq * std::max(k, 1) * (order + 1), 1.0);
  for (std::size_t q = 0; q < nq; ++q)
    for (int j = 0; j < k; ++j) {
      double* row = &powers[(q * k + j) * (order + 1)];
      for (int p = 1; p <= order; ++p) row[p] = row[p - 1] * rule.nodes[q][j];
    }
  std::array<int, kMaxDim> alpha{0, 0, 0};
  for (;;) {
    int total = 0;
    for (int j = 0; j < k; ++j) total += alpha[j];
    if (total <= order) {
      double sum = 0;
      for (std::size_t q = 0; q < nq; ++q) {
        double m = rule.weights[q];
        for (int j = 0; j < k; ++j) m *= powers[(q * k + j) * (order + 1) + alpha[j]];
        sum += m;
      }
      double exact = dirichlet_moment(k, alpha);
      if (std::abs(sum - exact) > 1e-12 * exact)
        throw Error("quadrature: rule of order " + std::to_string(order) + " on the " + std::to_string(k) +
                    "-simplex fails its exactness certificate");
    }
    if (k == 0) break;
    int j = k - 1;
    // advance to the next multi-index with |alpha| <= order
    while (j >= 0) {
      ++alpha[j];
      int s = 0;
      for (int i = 0; i < k; ++i) s += alpha[i];
      if (s <= order) break;
      alpha[j--] = 0;
    }
    if (j < 0) break;
  }
}

}  // namespace detail

/// A family of simplex rules (k = 0..3) exact for polynomials of total degree <= order.
class QuadratureRule {
 public:
  static constexpr int kDefaultOrder = 5;
  static constexpr int kMaxOrder = 64;

  explicit QuadratureRule(int order = kDefaultOrder) : order_(order) {
    if (order < 1) throw Error("QuadratureRule: order must be >= 1");
    if (order > kMaxOrder) throw Error("QuadratureRule: order exceeds " + std::to_string(kMaxOrder));
    for (int k = 0; k <= kMaxDim; ++k) {
      rules_[k] = detail::conical_product(k, order);
      detail::certify(rules_[k], order);
    }
  }

  /// Shared, certified rule of the given order (constructed once per process).
  static const QuadratureRule& of_order(int order) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<QuadratureRule>(order);
    return *slot;
  }

  int order() const { return order_; }
  const SimplexRule& simplex(int k) const { return rules_.at(k); }

 private:
  int order_;
  std::array<SimplexRule, kMaxDim + 1> rules_;
};

}  // namespace disloc::geometry
