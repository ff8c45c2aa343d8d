#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace wlsmin {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_k.
inline QuadratureRule gauss_legendre(int k) {
  QuadratureRule r;
  r.nodes.resize(static_cast<std::size_t>(k));
  r.weights.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= k; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      if (k == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(k - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(k - 1 - i)] = w;
  }
  return r;
}

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
double integrate(F&& f, double a, double b, int panels = 64, int order = 16) {
  static thread_local QuadratureRule cached;
  if (static_cast<int>(cached.nodes.size()) != order) cached = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    double s = 0.0;
    for (std::size_t i = 0; i < cached.nodes.size(); ++i) s += cached.weights[i] * f(lo + 0.5 * h * (cached.nodes[i] + 1.0));
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace wlsmin
