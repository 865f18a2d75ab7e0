#pragma once

// Circle-circle intersection areas and their rectangle / inscribed-circle
// bounds. Lengths are dimensionless doubles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "forest_sense/errors.hpp"

namespace forest_sense::geometry {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Disk {
  Point2 center;
  double radius = 0.0;

  bool contains(Point2 p) const { return distance(center, p) <= radius; }
};

namespace detail {

inline void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

inline void require_lens_regime(double r1, double r2, double d) {
  require_nonnegative(r1, "r1");
  require_nonnegative(r2, "r2");
  require_nonnegative(d, "d");
  if (d < std::abs(r1 - r2) || d > r1 + r2) {
    throw DomainError("center distance " + std::to_string(d) + " outside lens regime [" +
                      std::to_string(std::abs(r1 - r2)) + ", " + std::to_string(r1 + r2) + "]");
  }
}

// Circular segment area over r^2 for half-angle theta: theta - sin(theta) cos(theta).
// Summed as (u - sin u) / 2 with u = 2 theta; the series avoids cancellation for small u.
inline double segment_shape(double theta) {
  const double u = 2.0 * theta;
  if (u >= 1.0) return 0.5 * (u - std::sin(u));
  double term = u * u * u / 6.0;
  double sum = 0.0;
  for (int k = 1; term != 0.0 && std::abs(term) > 1e-17 * sum; ++k) {
    sum += term;
    term *= -u * u / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return 0.5 * sum;
}

}  // namespace detail

/// Area of B(o, r1) ∩ B(p, r2) with |p| = d.
inline double lens_area(double r1, double r2, double d) {
  detail::require_nonnegative(r1, "r1");
  detail::require_nonnegative(r2, "r2");
  detail::require_nonnegative(d, "d");

  if (r1 > r2) std::swap(r1, r2);  // canonical order keeps the result bitwise symmetric
  const double small = r1;
  const double cap = std::numbers::pi * small * small;
  if (d <= r2 - r1) return cap;
  if (d >= r1 + r2) return 0.0;

  // Chord half-length h and signed distances x1, x2 from each center to the chord.
  const double kite = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  const double h = 0.5 * std::sqrt(std::max(kite, 0.0)) / d;
  const double x1 = 0.5 * ((d - r2) * (d + r2) + r1 * r1) / d;
  const double x2 = 0.5 * ((d - r1) * (d + r1) + r2 * r2) / d;
  const double area = r1 * r1 * detail::segment_shape(std::atan2(h, x1)) +
                      r2 * r2 * detail::segment_shape(std::atan2(h, x2));
  return std::clamp(area, 0.0, cap);
}

/// Rectangle of width r1 + r2 - d and height min(2 r1, 2 r2) that covers the lens.
inline double lens_area_rect_upper(double r1, double r2, double d) {
  detail::require_lens_regime(r1, r2, d);
  return (r1 + r2 - d) * std::min(2.0 * r1, 2.0 * r2);
}

/// Area of the circle of diameter r1 + r2 - d inscribed in the lens.
inline double lens_area_circ_lower(double r1, double r2, double d) {
  detail::require_lens_regime(r1, r2, d);
  const double rho = 0.5 * (r1 + r2 - d);
  return std::numbers::pi * rho * rho;
}

// Minkowski sum of two centered balls is a ball of the summed radius.
inline double minkowski_ball_radius(double r_a, double r_b) {
  detail::require_nonnegative(r_a, "r_a");
  detail::require_nonnegative(r_b, "r_b");
  return r_a + r_b;
}

inline Disk minkowski_sum(const Disk& a, const Disk& b) {
  return Disk{{a.center.x + b.center.x, a.center.y + b.center.y},
              minkowski_ball_radius(a.radius, b.radius)};
}

}  // namespace forest_sense::geometry
