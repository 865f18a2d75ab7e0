#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "forest_sense/analytic.hpp"
#include "forest_sense/montecarlo.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace forest_sense;
using namespace forest_sense::analytic;

namespace {

const NetworkModel kFig2{5.0, 5.0, 0.0};
const NetworkModel kFig4{10.0, 10.0, 1.0};
const EventModel kUnitSpeed{1.0};

}  // namespace

TEST_CASE("network model validates and derives density", "[analytic]") {
  CHECK(kFig2.density() == Approx(5.0 / (25.0 * std::numbers::pi)));
  CHECK(NetworkModel::from_density(3.0, 1.0 / std::numbers::pi, 0.0).mean_sensors() == Approx(9.0));
  CHECK_THROWS_AS(NetworkModel(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(NetworkModel(-1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(NetworkModel(1.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(NetworkModel(1.0, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(EventModel(-1.0), DomainError);
  CHECK(kUnitSpeed.envelope_radius(4.0, kFig4) == 5.0);
  CHECK_THROWS_AS(kUnitSpeed.envelope_radius(-1.0, kFig4), DomainError);
}

TEST_CASE("event radius density", "[analytic]") {
  CHECK(event_radius_pdf(0.0, kFig4) == 0.0);
  CHECK(event_radius_pdf(10.0, kFig4) == Approx(2.0 / 10.0));
  CHECK(event_radius_pdf(10.5, kFig4) == 0.0);
  CHECK(event_radius_pdf(-1.0, kFig4) == 0.0);
  CHECK(quadrature::integrate([](double y) { return event_radius_pdf(y, kFig4); }, 0.0, 10.0) ==
        Approx(1.0).margin(1e-14));
}

TEST_CASE("contact CDF reference values", "[analytic]") {
  CHECK(contact_cdf(0.0, kFig2) == 0.0);
  CHECK(contact_cdf(10.0, kFig2) == Approx(1.0 - std::exp(-5.0)).margin(1e-15));
  CHECK(contact_cdf(10.0, kFig2) == Approx(0.9932621).margin(1e-7));

  // Frozen from an independent scipy adaptive-quadrature evaluation.
  struct Case {
    double r, rd, m, expected;
  };
  for (const auto& c : {Case{2, 5, 5, 0.479881867441873}, Case{5, 5, 5, 0.934059935738674},
                        Case{7, 5, 5, 0.983969977619989}, Case{0.3, 5, 5, 0.0173874893633077},
                        Case{9.9, 5, 5, 0.993260764664634}, Case{1, 10, 10, 0.0912587894837023},
                        Case{15, 10, 10, 0.999826105992617}}) {
    INFO("r=" << c.r << " rd=" << c.rd << " m=" << c.m);
    CHECK(contact_cdf(c.r, NetworkModel(c.rd, c.m, 0.0)) == Approx(c.expected).margin(1e-9));
  }
}

TEST_CASE("contact CDF matches the chord-area oracle", "[analytic]") {
  for (double r : {0.5, 2.0, 4.0, 6.5, 9.0}) {
    INFO("r=" << r);
    CHECK(contact_cdf(r, kFig2) == Approx(oracles::contact_cdf_chords(r, 5.0, 5.0)).margin(2e-6));
  }
}

TEST_CASE("contact CDF matches Monte Carlo at r = 2", "[analytic]") {
  const std::vector<double> grid{2.0};
  const auto est = mc::empirical_contact_cdf(kFig2, grid, 1'000'000, {11, 1}).points.front();
  CHECK(std::abs(contact_cdf(2.0, kFig2) - est.estimate) <= 3.0 * est.std_error);
}

TEST_CASE("contact CDF is continuous at r = 2 r_d", "[analytic]") {
  const double below = contact_cdf(std::nextafter(10.0, 0.0), kFig2);
  CHECK(below == Approx(1.0 - std::exp(-5.0)).margin(1e-9));
  CHECK(contact_cdf(10.0 - 1e-6, kFig2) == Approx(1.0 - std::exp(-5.0)).margin(1e-9));
}

TEST_CASE("contact CDF is a valid CDF on a grid", "[analytic]") {
  double prev = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = 12.0 * i / 200.0;
    const double f = contact_cdf(r, kFig2);
    REQUIRE(f >= prev - 1e-12);
    REQUIRE(f <= 1.0 - std::exp(-5.0) + 1e-12);
    prev = f;
  }
  CHECK(contact_cdf(std::numeric_limits<double>::infinity(), kFig2) == Approx(1.0 - std::exp(-5.0)));
  CHECK_THROWS_AS(contact_cdf(-1.0, kFig2), DomainError);
}

TEST_CASE("quadrature failure surfaces as NumericError", "[analytic]") {
  QuadratureSpec starved;
  starved.abs_tol = 1e-16;
  starved.rel_tol = 1e-16;
  starved.max_subdivisions = 1;
  CHECK_THROWS_AS(contact_cdf(2.0, kFig2, starved), NumericError);
}

TEST_CASE("bound closed forms match their term-by-term expressions", "[analytic]") {
  for (double r : {0.05, 0.5, 2.0, 4.9, 5.0, 5.1, 7.0, 9.99}) {
    INFO("r=" << r);
    CHECK(contact_cdf_upper_closed_form(r, kFig2) == Approx(oracles::literal_upper(r, 5, 5)).margin(1e-12));
    CHECK(contact_cdf_lower(r, kFig2) == Approx(oracles::literal_lower(r, 5, 5)).margin(1e-12));
  }
}

TEST_CASE("upper closed form stays accurate for tiny r", "[analytic]") {
  // The term-by-term expression loses every digit to cancellation at this radius.
  const double r = 1e-7;
  const QuadratureSpec fine{1e-24, 1e-10, 1 << 16};
  const double exact = contact_cdf(r, kFig2, fine);
  const double upper = contact_cdf_upper_closed_form(r, kFig2);
  CHECK(upper >= exact);
  CHECK(upper == Approx(contact_cdf_bound_quadrature(BoundingArea::rectangle, r, kFig2, fine)).epsilon(1e-6));
}

TEST_CASE("bounds at r = 0 and saturation", "[analytic]") {
  CHECK(contact_cdf_upper(0.0, kFig2) == 0.0);
  CHECK(contact_cdf_upper_closed_form(0.0, kFig2) == 0.0);
  CHECK(contact_cdf_lower(0.0, kFig2) == 0.0);
  CHECK(contact_cdf_loose_upper(0.0, kFig2) == 0.0);
  const double sat = 1.0 - std::exp(-5.0);
  for (double r : {10.0, 12.0}) {
    CHECK(contact_cdf_upper(r, kFig2) == Approx(sat));
    CHECK(contact_cdf_lower(r, kFig2) == Approx(sat));
    CHECK(contact_cdf_loose_upper(r, kFig2) == Approx(sat));
  }
  CHECK(contact_cdf_loose_upper(5.0, kFig2) == Approx(sat));
  CHECK(contact_cdf_loose_upper(7.0, kFig2) == Approx(sat));
}

TEST_CASE("bounds at r = 2 for m = 5, r_d = 5", "[analytic]") {
  const double exact = contact_cdf(2.0, kFig2);
  CHECK(contact_cdf_upper(2.0, kFig2) >= exact);
  CHECK(contact_cdf_lower(2.0, kFig2) <= exact);
  CHECK(contact_cdf_loose_upper(2.0, kFig2) >= contact_cdf_upper(2.0, kFig2));

  // Frozen scipy values of the three bounding-area integrals.
  CHECK(contact_cdf_bound_quadrature(BoundingArea::rectangle, 2.0, kFig2) ==
        Approx(0.530513002511073).margin(1e-9));
  CHECK(contact_cdf_upper(2.0, kFig2) == Approx(0.520179647230969).margin(1e-9));
  CHECK(contact_cdf_lower(2.0, kFig2) == Approx(0.420902366505891).margin(1e-9));

  const auto dual = dual_evaluate_bounds(2.0, kFig2);
  CHECK(dual.upper_formula_gap() <= 1e-6);
  CHECK(dual.lower_gap() <= 1e-6);
}

TEST_CASE("the closed-form upper bound can exceed the loose bound", "[analytic]") {
  // The clamped-rectangle quadrature does not; this is why it is the reported bound.
  const double r = 8.2;
  CHECK(contact_cdf_upper_closed_form(r, kFig2) > contact_cdf_loose_upper(r, kFig2));
  CHECK(contact_cdf_upper(r, kFig2) <= contact_cdf_loose_upper(r, kFig2) + 1e-12);
}

TEST_CASE("bound sandwich on random radii and models", "[analytic]") {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = 1e-9;
  for (int i = 0; i < 300; ++i) {
    const NetworkModel net(0.5 + 20.0 * unit(eng), 0.1 + 30.0 * unit(eng), 0.0);
    const double r = 2.2 * net.forest_radius() * unit(eng);
    INFO("rd=" << net.forest_radius() << " m=" << net.mean_sensors() << " r=" << r);
    const double exact = contact_cdf(r, net);
    const double lower = contact_cdf_lower(r, net);
    const double upper = contact_cdf_upper(r, net);
    REQUIRE(lower <= exact + tol);
    REQUIRE(exact <= upper + tol);
    REQUIRE(upper <= contact_cdf_loose_upper(r, net) + tol);
    REQUIRE(exact <= contact_cdf_upper_closed_form(r, net) + tol);
    const auto dual = dual_evaluate_bounds(r, net);
    REQUIRE(dual.lower_gap() <= 1e-6);
    REQUIRE(dual.upper_formula_gap() <= 1e-6);
  }
}

TEST_CASE("asymptotic limits", "[analytic]") {
  CHECK(contact_cdf_limit_small_rd(NetworkModel(1.0, 5.0, 0.0)) == Approx(0.9932621).margin(1e-7));
  CHECK(contact_cdf_limit_small_rd(NetworkModel(1.0, 0.0, 0.0)) == 0.0);

  const NetworkModel tiny(1e-3, 5.0, 0.0);
  for (double r : {0.0021, 0.01, 1.0, 100.0}) {
    CHECK(contact_cdf(r, tiny) == Approx(contact_cdf_limit_small_rd(tiny)).margin(1e-9));
  }

  const NetworkModel unit_density = NetworkModel::from_density(1.0, 1.0 / std::numbers::pi, 0.0);
  CHECK(contact_cdf_limit_large_rd(0.0, unit_density) == 0.0);
  CHECK(contact_cdf_limit_large_rd(1.0, unit_density) == Approx(0.6321206).margin(1e-7));

  const NetworkModel huge = NetworkModel::from_density(1e3, 1.0 / std::numbers::pi, 0.0);
  CHECK(contact_cdf(1.0, huge) == Approx(contact_cdf_limit_large_rd(1.0, huge)).margin(1e-3));
}

TEST_CASE("conditional sensing probability", "[analytic]") {
  const NetworkModel no_range(10.0, 10.0, 0.0);
  CHECK(conditional_sensing_prob(0.0, 3.0, no_range, kUnitSpeed) == 0.0);
  CHECK(conditional_sensing_prob(20.0, 0.0, kFig4, kUnitSpeed) == Approx(1.0 - std::exp(-10.0)));

  // t = 4, y = 3: the r_F = 5 disk lies inside the forest, area 25 pi.
  const double expected = 1.0 - std::exp(-kFig4.density() * geometry::lens_area(10, 5, 3));
  CHECK(conditional_sensing_prob(4.0, 3.0, kFig4, kUnitSpeed) == Approx(expected).margin(1e-15));
  CHECK(expected == Approx(1.0 - std::exp(-2.5)).margin(1e-12));
  CHECK_THROWS_AS(conditional_sensing_prob(1.0, 11.0, kFig4, kUnitSpeed), DomainError);
}

TEST_CASE("sensing probability integrates the conditional probability", "[analytic]") {
  for (double t : {0.0, 2.0, 7.5, 14.0}) {
    const double direct = quadrature::integrate(
        [&](double y) { return conditional_sensing_prob(t, y, kFig4, kUnitSpeed) * event_radius_pdf(y, kFig4); },
        0.0, 10.0, QuadratureSpec{1e-12, 1e-12, 1 << 16});
    CHECK(sensing_prob(t, kFig4, kUnitSpeed) == Approx(direct).margin(1e-8));
  }
}

TEST_CASE("sensing probability edge cases", "[analytic]") {
  const NetworkModel no_range(10.0, 10.0, 0.0);
  CHECK(sensing_prob(0.0, no_range, kUnitSpeed) == 0.0);
  CHECK(sensing_prob(25.0, kFig4, kUnitSpeed) == Approx(1.0 - std::exp(-10.0)).margin(1e-15));
  CHECK(sensing_prob(25.0, kFig4, kUnitSpeed) == Approx(0.9999546).margin(1e-7));
  CHECK(sensing_prob(5.0, no_range, EventModel(0.0)) == 0.0);
  CHECK(sensing_prob(5.0, NetworkModel(10.0, 0.0, 1.0), kUnitSpeed) == 0.0);
}

TEST_CASE("sensing delegates to the contact CDF at r_F(t)", "[analytic]") {
  for (int i = 0; i <= 100; ++i) {
    const double t = 19.0 * i / 100.0;
    REQUIRE(sensing_prob(t, kFig4, kUnitSpeed) == contact_cdf(1.0 * t + 1.0, kFig4));
  }
  CHECK(coverage_prob(kFig4) == sensing_prob(0.0, kFig4, kUnitSpeed));
  CHECK(coverage_prob(NetworkModel(10.0, 10.0, 0.0)) == 0.0);
  CHECK(coverage_prob(NetworkModel(10.0, 10.0, 20.0)) == Approx(1.0 - std::exp(-10.0)));
}

TEST_CASE("sensing bounds order and saturate", "[analytic]") {
  const NetworkModel no_range(10.0, 10.0, 0.0);
  CHECK(sensing_prob_upper(0.0, no_range, kUnitSpeed) == 0.0);
  CHECK(sensing_prob_lower(0.0, no_range, kUnitSpeed) == 0.0);
  CHECK(sensing_prob_loose_upper(0.0, no_range, kUnitSpeed) == 0.0);
  CHECK(sensing_prob_upper_closed_form(0.0, no_range, kUnitSpeed) == 0.0);

  for (double rd : {10.0, 20.0}) {
    const NetworkModel net(rd, 10.0, 1.0);
    for (int i = 0; i <= 60; ++i) {
      const double t = (2.0 * rd + 2.0) * i / 60.0;
      const double exact = sensing_prob(t, net, kUnitSpeed);
      INFO("rd=" << rd << " t=" << t);
      REQUIRE(sensing_prob_lower(t, net, kUnitSpeed) <= exact + 1e-9);
      REQUIRE(exact <= sensing_prob_upper(t, net, kUnitSpeed) + 1e-9);
      REQUIRE(sensing_prob_upper(t, net, kUnitSpeed) <= sensing_prob_loose_upper(t, net, kUnitSpeed) + 1e-9);
    }
  }
  const double t_sat = 20.0;  // r_F = 21 > 2 r_d
  CHECK(sensing_prob_upper(t_sat, kFig4, kUnitSpeed) == sensing_prob_lower(t_sat, kFig4, kUnitSpeed));
  CHECK(sensing_prob_upper(t_sat, kFig4, kUnitSpeed) == Approx(1.0 - std::exp(-10.0)));
}

TEST_CASE("sensing probability is monotone in t, r_S, v_F and m", "[analytic]") {
  const double t = 3.0;
  double prev = -1.0;
  for (double tt = 0.0; tt <= 20.0; tt += 0.5) {
    const double p = sensing_prob(tt, kFig4, kUnitSpeed);
    REQUIRE(p >= prev - 1e-12);
    prev = p;
  }
  prev = -1.0;
  for (double rs = 0.0; rs <= 8.0; rs += 0.5) {
    const double p = sensing_prob(t, NetworkModel(10.0, 10.0, rs), kUnitSpeed);
    REQUIRE(p >= prev - 1e-12);
    prev = p;
  }
  prev = -1.0;
  for (double vf = 0.0; vf <= 4.0; vf += 0.25) {
    const double p = sensing_prob(t, kFig4, EventModel(vf));
    REQUIRE(p >= prev - 1e-12);
    prev = p;
  }
  prev = -1.0;
  for (double m = 0.0; m <= 40.0; m += 2.0) {
    const double p = sensing_prob(t, NetworkModel(10.0, m, 1.0), kUnitSpeed);
    REQUIRE(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("empty network gives identically zero CDFs", "[analytic]") {
  const NetworkModel empty(5.0, 0.0, 1.0);
  for (double r : {0.0, 1.0, 10.0, 20.0}) {
    CHECK(contact_cdf(r, empty) == 0.0);
    CHECK(contact_cdf_upper(r, empty) == 0.0);
    CHECK(contact_cdf_upper_closed_form(r, empty) == 0.0);
    CHECK(contact_cdf_lower(r, empty) == 0.0);
    CHECK(contact_cdf_loose_upper(r, empty) == 0.0);
  }
}
