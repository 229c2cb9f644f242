#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace eigrestrict {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1], nodes ascending.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  const long double pi = std::numbers::pi_v<long double>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const long double p2 = ((2.0L * j - 1.0L) * x * p1 - (j - 1.0L) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    // recompute derivative at the converged node
    long double p0 = 1.0L, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const long double p2 = ((2.0L * j - 1.0L) * x * p1 - (j - 1.0L) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0L);
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.nodes[lo] = static_cast<double>(-x);
    q.nodes[hi] = static_cast<double>(x);
    q.weights[lo] = static_cast<double>(w);
    q.weights[hi] = static_cast<double>(w);
  }
  if (n % 2 == 1) q.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return q;
}

/// Composite Gauss–Legendre rule with exactly n nodes on [a, b], panels of order <= max_order.
inline QuadratureRule composite_gauss_legendre(int n, double a, double b, int max_order = 16) {
  if (n < 1) throw std::invalid_argument("composite_gauss_legendre: n must be >= 1");
  const int panels = (n + max_order - 1) / max_order;
  const int base = n / panels;
  const int extra = n % panels;
  QuadratureRule out;
  out.nodes.reserve(static_cast<std::size_t>(n));
  out.weights.reserve(static_cast<std::size_t>(n));
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const int order = base + (p < extra ? 1 : 0);
    const QuadratureRule g = gauss_legendre(order);
    const double lo = a + p * h;
    for (int i = 0; i < order; ++i) {
      out.nodes.push_back(lo + 0.5 * h * (g.nodes[static_cast<std::size_t>(i)] + 1.0));
      out.weights.push_back(0.5 * h * g.weights[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

}  // namespace eigrestrict
