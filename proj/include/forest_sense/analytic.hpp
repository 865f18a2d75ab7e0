#pragma once

// Closed-form and quadrature quantities of a finite Boolean-Poisson sensor
// network in a disk forest: contact-distance CDF and its bounds, asymptotic
// limits, and the event-sensing probability (capacity functional).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "forest_sense/errors.hpp"
#include "forest_sense/geometry.hpp"
#include "forest_sense/quadrature.hpp"

namespace forest_sense {

using quadrature::QuadratureSpec;

/// Forest disk B(o, r_d) with a finite homogeneous PPP of mean count m and
/// sensors of fixed sensing radius r_S. The density m / (pi r_d^2) is derived.
class NetworkModel {
 public:
  NetworkModel(double forest_radius, double mean_sensors, double sensing_radius)
      : forest_radius_(forest_radius),
        mean_sensors_(mean_sensors),
        sensing_radius_(sensing_radius) {
    if (!(forest_radius > 0.0) || !std::isfinite(forest_radius)) {
      throw DomainError("forest radius must be finite and > 0, got " + std::to_string(forest_radius));
    }
    if (!(mean_sensors >= 0.0) || !std::isfinite(mean_sensors)) {
      throw DomainError("mean sensor count must be finite and >= 0, got " +
                        std::to_string(mean_sensors));
    }
    if (!(sensing_radius >= 0.0) || !std::isfinite(sensing_radius)) {
      throw DomainError("sensing radius must be finite and >= 0, got " +
                        std::to_string(sensing_radius));
    }
    density_ = mean_sensors / (std::numbers::pi * forest_radius * forest_radius);
  }

  /// Builds the model from a density instead of a mean count.
  static NetworkModel from_density(double forest_radius, double density, double sensing_radius) {
    return {forest_radius, density * std::numbers::pi * forest_radius * forest_radius,
            sensing_radius};
  }

  double forest_radius() const noexcept { return forest_radius_; }
  double mean_sensors() const noexcept { return mean_sensors_; }
  double sensing_radius() const noexcept { return sensing_radius_; }
  double density() const noexcept { return density_; }

  NetworkModel with_sensing_radius(double rs) const { return {forest_radius_, mean_sensors_, rs}; }

 private:
  double forest_radius_;
  double mean_sensors_;
  double sensing_radius_;
  double density_;
};

/// Windless fire: a disk around the origin point growing at constant speed.
class EventModel {
 public:
  explicit EventModel(double speed) : speed_(speed) {
    if (!(speed >= 0.0) || !std::isfinite(speed)) {
      throw DomainError("event speed must be finite and >= 0, got " + std::to_string(speed));
    }
  }

  double speed() const noexcept { return speed_; }

  /// Radius of the fire envelope dilated by the sensing disk: v_F t + r_S.
  double envelope_radius(double t, const NetworkModel& net) const {
    if (!(t >= 0.0)) throw DomainError("time must be >= 0, got " + std::to_string(t));
    return geometry::minkowski_ball_radius(net.sensing_radius(), speed_ * t);
  }

 private:
  double speed_;
};

namespace analytic {

namespace detail {

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

inline void require_radius(double r) {
  if (!(r >= 0.0)) throw DomainError("radius must be >= 0, got " + std::to_string(r));
}

// Mass of the CDF at finite distances: 1 - e^{-m}.
inline double saturation(const NetworkModel& net) { return -std::expm1(-net.mean_sensors()); }

inline bool saturated(double r, const NetworkModel& net) {
  return r >= 2.0 * net.forest_radius();
}

// Terms shared by the bound derivations for r <= 2 r_d.
struct BoundTerms {
  double s;        // min(r, r_d)
  double alpha;    // 2 lambda min(r, r_d)
  double a;        // |r_d - r|, end of the containment range
  double span;     // r_d - a, length of the lens range
  double contained;  // e^{-lambda pi s^2} a^2 / r_d^2
};

inline BoundTerms bound_terms(double r, const NetworkModel& net) {
  const double rd = net.forest_radius();
  const double lambda = net.density();
  BoundTerms b{};
  b.s = std::min(r, rd);
  b.alpha = 2.0 * lambda * b.s;
  b.a = std::abs(rd - r);
  b.span = std::max(rd - b.a, 0.0);
  b.contained = std::exp(-lambda * std::numbers::pi * b.s * b.s) * b.a * b.a / (rd * rd);
  return b;
}

// erf(hi) - erf(lo) without cancellation in the upper tail.
inline double erf_difference(double hi, double lo) {
  if (lo > 0.5) return std::erfc(lo) - std::erfc(hi);
  return std::erf(hi) - std::erf(lo);
}

}  // namespace detail

/// Density of the distance of a uniform event origin from the forest center.
inline double event_radius_pdf(double y, const NetworkModel& net) {
  const double rd = net.forest_radius();
  if (y < 0.0 || y > rd) return 0.0;
  return 2.0 * y / (rd * rd);
}

/// P(R_C <= r): average over the event origin of the probability that
/// B(Y, r) ∩ forest holds at least one sensor. Mass e^{-m} sits at infinity.
inline double contact_cdf(double r, const NetworkModel& net, const QuadratureSpec& q = {}) {
  detail::require_radius(r);
  if (net.mean_sensors() == 0.0) return 0.0;
  if (detail::saturated(r, net)) return detail::clamp_probability(detail::saturation(net));
  if (r == 0.0) return 0.0;

  const double rd = net.forest_radius();
  const double lambda = net.density();
  const auto integrand = [&](double y) {
    return -std::expm1(-lambda * geometry::lens_area(r, rd, y)) * event_radius_pdf(y, net);
  };
  const double kink = std::abs(r - rd);
  if (kink > 0.0 && kink < rd) {
    const std::array<double, 3> breaks{0.0, kink, rd};
    return detail::clamp_probability(quadrature::integrate_piecewise(integrand, breaks, q));
  }
  return detail::clamp_probability(quadrature::integrate(integrand, 0.0, rd, q));
}

/// Closed form of the rectangle-area upper bound. Not guaranteed to be
/// below contact_cdf_loose_upper; see contact_cdf_upper for the tighter route.
inline double contact_cdf_upper_closed_form(double r, const NetworkModel& net) {
  detail::require_radius(r);
  if (net.mean_sensors() == 0.0) return 0.0;
  if (detail::saturated(r, net)) return detail::clamp_probability(detail::saturation(net));

  const double rd = net.forest_radius();
  const double lambda = net.density();
  const auto b = detail::bound_terms(r, net);
  const double x = b.alpha * b.span;

  if (x >= 0.5) {
    const double inv = 1.0 / b.alpha;
    const double lens_part = 2.0 * inv / (rd * rd) *
                             (std::exp(-b.alpha * r) * (rd - inv) +
                              std::exp(-b.alpha * b.alpha / lambda) * (inv - b.a));
    return detail::clamp_probability(1.0 - (b.contained + lens_part));
  }
  // Small alpha (r_d - a): the form above is 1 minus a sum within O(x) of 1.
  // Sum the complements instead; the lens integrand is entire with exponent
  // below 1 over the range, so one Gauss-Legendre panel is exact to rounding.
  const double contained =
      -std::expm1(-lambda * std::numbers::pi * b.s * b.s) * b.a * b.a / (rd * rd);
  const auto lens = [&](double y) {
    return -std::expm1(-b.alpha * (r + rd - y)) * 2.0 * y / (rd * rd);
  };
  return detail::clamp_probability(
      contained + quadrature::gauss_legendre(lens, b.a, rd, quadrature::default_rule()));
}

/// Closed-form inscribed-circle lower bound (erf form).
inline double contact_cdf_lower(double r, const NetworkModel& net) {
  detail::require_radius(r);
  if (net.mean_sensors() == 0.0) return 0.0;
  if (detail::saturated(r, net)) return detail::clamp_probability(detail::saturation(net));
  if (r == 0.0) return 0.0;

  const double rd = net.forest_radius();
  const double lambda = net.density();
  const auto b = detail::bound_terms(r, net);
  const double root_lambda = std::sqrt(lambda);
  const double hi = 0.5 * b.alpha * std::sqrt(std::numbers::pi / lambda);
  const double lo = 0.5 * r * std::sqrt(lambda * std::numbers::pi);

  const double erf_part =
      2.0 * (rd + r) / (rd * rd * root_lambda) * detail::erf_difference(hi, lo);
  const double gauss_part =
      4.0 / (std::numbers::pi * rd * rd * lambda) *
      (std::exp(-std::numbers::pi * b.alpha * b.alpha / (4.0 * lambda)) -
       std::exp(-lambda * std::numbers::pi * r * r / 4.0));
  return detail::clamp_probability(1.0 - (b.contained + erf_part + gauss_part));
}

/// Area substituted for the lens on |r - r_d| <= y <= r_d.
enum class BoundingArea {
  rectangle,          // (r + r_d - y) min(2r, 2r_d)
  rectangle_clamped,  // min(pi min(r, r_d)^2, rectangle)
  inscribed_circle,   // pi ((r + r_d - y) / 2)^2
};

/// Contact CDF with the lens area replaced by a bounding area, by quadrature.
inline double contact_cdf_bound_quadrature(BoundingArea kind, double r, const NetworkModel& net,
                                           const QuadratureSpec& q = {}) {
  detail::require_radius(r);
  if (net.mean_sensors() == 0.0) return 0.0;
  if (detail::saturated(r, net)) return detail::clamp_probability(detail::saturation(net));
  if (r == 0.0) return 0.0;

  const double rd = net.forest_radius();
  const double lambda = net.density();
  const auto b = detail::bound_terms(r, net);
  const double disk_area = std::numbers::pi * b.s * b.s;

  const auto area = [&](double y) {
    if (y <= b.a) return disk_area;
    switch (kind) {
      case BoundingArea::rectangle:
        return geometry::lens_area_rect_upper(r, rd, y);
      case BoundingArea::rectangle_clamped:
        return std::min(disk_area, geometry::lens_area_rect_upper(r, rd, y));
      case BoundingArea::inscribed_circle:
        return geometry::lens_area_circ_lower(r, rd, y);
    }
    return disk_area;
  };
  const auto integrand = [&](double y) {
    return -std::expm1(-lambda * area(y)) * event_radius_pdf(y, net);
  };
  const std::array<double, 3> breaks{0.0, b.a, rd};
  return detail::clamp_probability(quadrature::integrate_piecewise(integrand, breaks, q));
}

/// Upper bound from the rectangle area capped at pi min(r, r_d)^2.
inline double contact_cdf_upper(double r, const NetworkModel& net, const QuadratureSpec& q = {}) {
  return contact_cdf_bound_quadrature(BoundingArea::rectangle_clamped, r, net, q);
}

/// Loose upper bound: the lens replaced by pi min(r, r_d)^2.
inline double contact_cdf_loose_upper(double r, const NetworkModel& net) {
  detail::require_radius(r);
  if (net.mean_sensors() == 0.0) return 0.0;
  if (r > 2.0 * net.forest_radius()) return detail::clamp_probability(detail::saturation(net));
  const double s = std::min(r, net.forest_radius());
  return detail::clamp_probability(-std::expm1(-net.density() * std::numbers::pi * s * s));
}

/// Both evaluation routes of each bound at one radius.
struct BoundDualEvaluation {
  double r = 0.0;
  double upper_closed_form = 0.0;
  double upper_rectangle_quadrature = 0.0;
  double upper_clamped_quadrature = 0.0;
  double lower_closed_form = 0.0;
  double lower_quadrature = 0.0;

  double upper_formula_gap() const { return std::abs(upper_closed_form - upper_rectangle_quadrature); }
  double upper_clamp_gap() const { return std::abs(upper_closed_form - upper_clamped_quadrature); }
  double lower_gap() const { return std::abs(lower_closed_form - lower_quadrature); }
};

inline BoundDualEvaluation dual_evaluate_bounds(double r, const NetworkModel& net,
                                                const QuadratureSpec& q = {}) {
  BoundDualEvaluation out;
  out.r = r;
  out.upper_closed_form = contact_cdf_upper_closed_form(r, net);
  out.upper_rectangle_quadrature = contact_cdf_bound_quadrature(BoundingArea::rectangle, r, net, q);
  out.upper_clamped_quadrature = contact_cdf_upper(r, net, q);
  out.lower_closed_form = contact_cdf_lower(r, net);
  out.lower_quadrature = contact_cdf_bound_quadrature(BoundingArea::inscribed_circle, r, net, q);
  return out;
}

/// r_d -> 0 with m fixed: every sensor is within any positive distance.
inline double contact_cdf_limit_small_rd(const NetworkModel& net) {
  return detail::clamp_probability(detail::saturation(net));
}

/// r_d -> infinity with density fixed: the infinite homogeneous PPP.
inline double contact_cdf_limit_large_rd(double r, const NetworkModel& net) {
  detail::require_radius(r);
  return detail::clamp_probability(-std::expm1(-net.density() * std::numbers::pi * r * r));
}

/// Probability that an event started at distance y from the center has been
/// sensed by time t.
inline double conditional_sensing_prob(double t, double y, const NetworkModel& net,
                                       const EventModel& ev) {
  if (!(y >= 0.0) || y > net.forest_radius()) {
    throw DomainError("event origin distance must lie in [0, r_d], got " + std::to_string(y));
  }
  const double reach = ev.envelope_radius(t, net);
  const double area = geometry::lens_area(net.forest_radius(), reach, y);
  return detail::clamp_probability(-std::expm1(-net.density() * area));
}

// The dilated envelope is a ball of radius r_F(t), so every sensing quantity
// is the matching contact-distance quantity at r_F(t).

inline double sensing_prob(double t, const NetworkModel& net, const EventModel& ev,
                           const QuadratureSpec& q = {}) {
  return contact_cdf(ev.envelope_radius(t, net), net, q);
}

inline double coverage_prob(const NetworkModel& net, const QuadratureSpec& q = {}) {
  return contact_cdf(net.sensing_radius(), net, q);
}

inline double sensing_prob_upper(double t, const NetworkModel& net, const EventModel& ev,
                                 const QuadratureSpec& q = {}) {
  return contact_cdf_upper(ev.envelope_radius(t, net), net, q);
}

inline double sensing_prob_upper_closed_form(double t, const NetworkModel& net,
                                             const EventModel& ev) {
  return contact_cdf_upper_closed_form(ev.envelope_radius(t, net), net);
}

inline double sensing_prob_lower(double t, const NetworkModel& net, const EventModel& ev) {
  return contact_cdf_lower(ev.envelope_radius(t, net), net);
}

inline double sensing_prob_loose_upper(double t, const NetworkModel& net, const EventModel& ev) {
  return contact_cdf_loose_upper(ev.envelope_radius(t, net), net);
}

}  // namespace analytic
}  // namespace forest_sense
