#pragma once

// Adaptive bisection over fixed-order Gauss-Legendre panels.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "forest_sense/errors.hpp"

namespace forest_sense::quadrature {

struct QuadratureSpec {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  std::size_t max_subdivisions = std::size_t{1} << 16;
};

/// Nodes and weights on [-1, 1], found by Newton iteration on P_N.
template <std::size_t N>
struct GaussLegendreRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendreRule() {
    for (std::size_t i = 0; i < (N + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(N) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0;
        double p2 = 0.0;
        for (std::size_t j = 1; j <= N; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
        }
        dp = static_cast<double>(N) * (z * p1 - p2) / (z * z - 1.0);
        const double z_prev = z;
        z = z_prev - p1 / dp;
        if (std::abs(z - z_prev) < 1e-16) break;
      }
      nodes[i] = -z;
      nodes[N - 1 - i] = z;
      weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
      weights[N - 1 - i] = weights[i];
    }
  }
};

inline const GaussLegendreRule<10>& default_rule() {
  static const GaussLegendreRule<10> rule;
  return rule;
}

template <class F, std::size_t N>
double gauss_legendre(const F& f, double a, double b, const GaussLegendreRule<N>& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

/// Integrates f over [a, b]. A panel is accepted once its two halves agree with
/// the whole within max(abs_tol * share of the interval, rel_tol * |estimate|).
template <class F>
double integrate(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(b > a)) return 0.0;
  const auto& rule = default_rule();
  const double total_width = b - a;

  struct Panel {
    double lo, hi, whole;
  };
  std::vector<Panel> stack{{a, b, gauss_legendre(f, a, b, rule)}};
  std::size_t subdivisions = 0;
  double result = 0.0;

  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const double left = gauss_legendre(f, p.lo, mid, rule);
    const double right = gauss_legendre(f, mid, p.hi, rule);
    const double refined = left + right;
    const double err = std::abs(refined - p.whole);
    const double budget =
        std::max(spec.abs_tol * (p.hi - p.lo) / total_width, spec.rel_tol * std::abs(refined));
    if (err <= budget || mid <= p.lo || mid >= p.hi) {
      result += refined;
      continue;
    }
    if (++subdivisions > spec.max_subdivisions) {
      throw NumericError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]",
                         err);
    }
    stack.push_back({p.lo, mid, left});
    stack.push_back({mid, p.hi, right});
  }
  return result;
}

/// Integrates over consecutive [breaks[i], breaks[i+1]] so each piece can be smooth.
template <class F>
double integrate_piecewise(const F& f, std::span<const double> breaks,
                           const QuadratureSpec& spec = {}) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    sum += integrate(f, breaks[i], breaks[i + 1], spec);
  }
  return sum;
}

}  // namespace forest_sense::quadrature
