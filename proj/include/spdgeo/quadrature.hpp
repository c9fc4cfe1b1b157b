#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "spdgeo/error.hpp"

namespace spdgeo {

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.nodes[lo] = 0.5 * (1.0 - x);
    q.nodes[hi] = 0.5 * (1.0 + x);
    q.weights[lo] = 0.5 * w;
    q.weights[hi] = 0.5 * w;
  }
  return q;
}

}  // namespace detail

inline const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one point");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

/// Composite rule over [a, b]: `panels` copies of the `per_panel`-point rule.
inline QuadratureRule composite_rule(double a, double b, int panels, int per_panel) {
  const QuadratureRule& base = gauss_legendre(per_panel);
  QuadratureRule q;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      q.nodes.push_back(a + h * (p + base.nodes[i]));
      q.weights.push_back(h * base.weights[i]);
    }
  }
  return q;
}

}  // namespace spdgeo
