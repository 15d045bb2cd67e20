#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace infsup {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Cached per order.
inline const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

/// Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gauss_on(double a, double b, int n) {
  const auto& base = gauss_legendre(n);
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

/// Uniform trapezoid rule on a periodic interval [0, L): n equal weights.
inline QuadratureRule periodic_trapezoid(double L, int n) {
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.assign(n, L / n);
  for (int i = 0; i < n; ++i) r.nodes[i] = L * i / n;
  return r;
}

/// Closed trapezoid rule on [a, b] with n intervals (n + 1 nodes).
inline QuadratureRule panel_trapezoid(double a, double b, int n) {
  QuadratureRule r;
  r.nodes.resize(n + 1);
  r.weights.assign(n + 1, (b - a) / n);
  r.weights.front() *= 0.5;
  r.weights.back() *= 0.5;
  for (int i = 0; i <= n; ++i) r.nodes[i] = a + (b - a) * i / n;
  return r;
}

}  // namespace infsup
