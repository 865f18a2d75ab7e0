#pragma once

// Figure-style experiments: analytic curves, their bounds and Monte Carlo
// estimates assembled into plot-ready CurveTables.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forest_sense/analytic.hpp"
#include "forest_sense/montecarlo.hpp"
#include "forest_sense/table.hpp"

namespace forest_sense::experiments {

inline constexpr std::size_t kDefaultGridPoints = 101;
inline constexpr std::size_t kDefaultSamples = 100000;

struct ExperimentSpec {
  NetworkModel net{10.0, 10.0, 1.0};
  EventModel ev{1.0};
  std::vector<double> grid;
  std::size_t n_samples = kDefaultSamples;
  mc::SeedSpec seed;
  QuadratureSpec quad;

  void validate() const {
    if (grid.empty()) throw DomainError("experiment grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) throw DomainError("experiment grid must be strictly increasing");
    }
    if (grid.front() < 0.0) throw DomainError("experiment grid must be nonnegative");
    if (n_samples == 0) throw DomainError("n_samples must be >= 1");
  }
};

inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw DomainError("grid needs at least one point");
  if (points == 1) return {lo};
  if (!(hi > lo)) throw DomainError("grid maximum must exceed its minimum");
  std::vector<double> out(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

/// r over [0, 2 r_d], covering both branches of the contact CDF.
inline std::vector<double> default_r_grid(const NetworkModel& net,
                                          std::size_t points = kDefaultGridPoints) {
  return linspace(0.0, 2.0 * net.forest_radius(), points);
}

/// t over [0, t_max] with r_F(t_max) = 2 r_d; [0, 1] when that is undefined.
inline double default_t_max(const NetworkModel& net, const EventModel& ev) {
  const double gap = 2.0 * net.forest_radius() - net.sensing_radius();
  if (ev.speed() > 0.0 && gap > 0.0) return gap / ev.speed();
  return 1.0;
}

inline std::vector<double> default_t_grid(const NetworkModel& net, const EventModel& ev,
                                          std::size_t points = kDefaultGridPoints) {
  return linspace(0.0, default_t_max(net, ev), points);
}

inline std::string format_label(const std::string& prefix, double v) {
  return prefix + table_io::format_number(v);
}

/// r, exact CDF, its three bounds and the Monte Carlo estimate.
inline CurveTable run_cdf_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto& net = spec.net;
  const auto mc_curve = mc::empirical_contact_cdf(net, spec.grid, spec.n_samples, spec.seed);
  CurveTable table(format_label("contact distance CDF, m=", net.mean_sensors()) +
                       format_label(", r_d=", net.forest_radius()),
                   {"r", "contact_cdf", "upper", "lower", "loose_upper", "mc", "mc_std_error"});
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const double r = spec.grid[i];
    table.add_row({r, analytic::contact_cdf(r, net, spec.quad),
                   analytic::contact_cdf_upper(r, net, spec.quad), analytic::contact_cdf_lower(r, net),
                   analytic::contact_cdf_loose_upper(r, net), mc_curve.points[i].estimate,
                   mc_curve.points[i].std_error});
  }
  return table;
}

/// r, upper - exact, exact - lower.
inline CurveTable run_bound_deviation(const ExperimentSpec& spec) {
  spec.validate();
  const auto& net = spec.net;
  CurveTable table(format_label("contact CDF bound deviation, m=", net.mean_sensors()) +
                       format_label(", r_d=", net.forest_radius()),
                   {"r", "upper_minus_exact", "exact_minus_lower"});
  for (double r : spec.grid) {
    const double exact = analytic::contact_cdf(r, net, spec.quad);
    table.add_row({r, analytic::contact_cdf_upper(r, net, spec.quad) - exact,
                   exact - analytic::contact_cdf_lower(r, net)});
  }
  return table;
}

/// Location and value of the largest entry of a column.
inline std::pair<double, double> max_deviation(const CurveTable& table, const std::string& column) {
  const std::size_t idx = table.column_index(column);
  std::pair<double, double> best{0.0, -std::numeric_limits<double>::infinity()};
  for (const auto& row : table.rows) {
    if (row[idx] > best.second) best = {row.front(), row[idx]};
  }
  return best;
}

/// t, exact sensing probability, its bounds and the Monte Carlo estimate.
inline CurveTable run_sensing_curve(const ExperimentSpec& spec) {
  spec.validate();
  const auto& net = spec.net;
  const auto& ev = spec.ev;
  const auto mc_curve = mc::empirical_sensing_prob(net, ev, spec.grid, spec.n_samples, spec.seed);
  CurveTable table(format_label("event sensing probability, r_d=", net.forest_radius()) +
                       format_label(", m=", net.mean_sensors()) +
                       format_label(", r_S=", net.sensing_radius()) + format_label(", v_F=", ev.speed()),
                   {"t", "sensing_prob", "upper", "lower", "loose_upper", "mc", "mc_std_error"});
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const double t = spec.grid[i];
    table.add_row({t, analytic::sensing_prob(t, net, ev, spec.quad),
                   analytic::sensing_prob_upper(t, net, ev, spec.quad),
                   analytic::sensing_prob_lower(t, net, ev), analytic::sensing_prob_loose_upper(t, net, ev),
                   mc_curve.points[i].estimate, mc_curve.points[i].std_error});
  }
  return table;
}

/// t, upper - exact, exact - lower for the sensing probability.
inline CurveTable run_sensing_deviation(const ExperimentSpec& spec) {
  spec.validate();
  const auto& net = spec.net;
  const auto& ev = spec.ev;
  CurveTable table(format_label("sensing bound deviation, r_d=", net.forest_radius()),
                   {"t", "upper_minus_exact", "exact_minus_lower"});
  for (double t : spec.grid) {
    const double exact = analytic::sensing_prob(t, net, ev, spec.quad);
    table.add_row({t, analytic::sensing_prob_upper(t, net, ev, spec.quad) - exact,
                   exact - analytic::sensing_prob_lower(t, net, ev)});
  }
  return table;
}

/// One analytic and one Monte Carlo column (with standard error) per sensing radius.
inline CurveTable run_range_sweep(const ExperimentSpec& spec, std::span<const double> rs_list) {
  spec.validate();
  if (rs_list.empty()) throw DomainError("sensing radius list is empty");
  std::vector<std::string> columns{"t"};
  for (double rs : rs_list) {
    columns.push_back(format_label("sensing_rs=", rs));
    columns.push_back(format_label("mc_rs=", rs));
    columns.push_back(format_label("mc_std_error_rs=", rs));
  }
  CurveTable table(format_label("sensing range sweep, r_d=", spec.net.forest_radius()) +
                       format_label(", m=", spec.net.mean_sensors()) +
                       format_label(", v_F=", spec.ev.speed()),
                   std::move(columns));

  std::vector<std::vector<double>> cols;
  for (double rs : rs_list) {
    const auto net = spec.net.with_sensing_radius(rs);
    std::vector<double> exact;
    for (double t : spec.grid) exact.push_back(analytic::sensing_prob(t, net, spec.ev, spec.quad));
    const auto mc_curve = mc::empirical_sensing_prob(net, spec.ev, spec.grid, spec.n_samples, spec.seed);
    std::vector<double> est, se;
    for (const auto& p : mc_curve.points) {
      est.push_back(p.estimate);
      se.push_back(p.std_error);
    }
    cols.push_back(std::move(exact));
    cols.push_back(std::move(est));
    cols.push_back(std::move(se));
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    std::vector<double> row{spec.grid[i]};
    for (const auto& c : cols) row.push_back(c[i]);
    table.add_row(std::move(row));
  }
  return table;
}

/// Sensing radius that keeps the summed sensing area m pi r_S^2 at total_area.
inline double tradeoff_sensing_radius(double total_area, double m) {
  if (!(total_area >= 0.0) || !(m > 0.0)) {
    throw DomainError("trade-off needs total_area >= 0 and m > 0");
  }
  return std::sqrt(total_area / (std::numbers::pi * m));
}

/// Per m: r_S from the fixed summed area, then the sensing probability at critical_time.
inline CurveTable run_tradeoff(double total_area, std::span<const double> m_list,
                               double critical_time, const ExperimentSpec& spec) {
  if (m_list.empty()) throw DomainError("mean sensor count list is empty");
  if (spec.n_samples == 0) throw DomainError("n_samples must be >= 1");
  const std::vector<double> at{critical_time};
  CurveTable table(format_label("sensor count / range trade-off, m pi r_S^2=", total_area) +
                       format_label(", t=", critical_time),
                   {"m", "r_s", "sensing_prob", "upper", "lower", "mc", "mc_std_error"});
  for (double m : m_list) {
    const NetworkModel net(spec.net.forest_radius(), m, tradeoff_sensing_radius(total_area, m));
    const auto mc_curve = mc::empirical_sensing_prob(net, spec.ev, at, spec.n_samples, spec.seed);
    table.add_row({m, net.sensing_radius(), analytic::sensing_prob(critical_time, net, spec.ev, spec.quad),
                   analytic::sensing_prob_upper(critical_time, net, spec.ev, spec.quad),
                   analytic::sensing_prob_lower(critical_time, net, spec.ev),
                   mc_curve.points[0].estimate, mc_curve.points[0].std_error});
  }
  return table;
}

/// Full analytic t-curves of the trade-off, one column per m.
inline CurveTable run_tradeoff_curves(double total_area, std::span<const double> m_list,
                                      const ExperimentSpec& spec) {
  spec.validate();
  std::vector<std::string> columns{"t"};
  std::vector<NetworkModel> nets;
  for (double m : m_list) {
    columns.push_back(format_label("sensing_m=", m));
    nets.emplace_back(spec.net.forest_radius(), m, tradeoff_sensing_radius(total_area, m));
  }
  CurveTable table(format_label("trade-off curves, m pi r_S^2=", total_area), std::move(columns));
  for (double t : spec.grid) {
    std::vector<double> row{t};
    for (const auto& net : nets) row.push_back(analytic::sensing_prob(t, net, spec.ev, spec.quad));
    table.add_row(std::move(row));
  }
  return table;
}

/// Empirical contact-distance and nearest-neighbour CDFs on shared realizations.
inline CurveTable run_nn_identity(const ExperimentSpec& spec) {
  spec.validate();
  const auto contact = mc::empirical_contact_cdf(spec.net, spec.grid, spec.n_samples, spec.seed);
  const auto nn = mc::empirical_nn_cdf(spec.net, spec.grid, spec.n_samples, spec.seed);
  CurveTable table(format_label("contact vs nearest-neighbour CDF, m=", spec.net.mean_sensors()) +
                       format_label(", r_d=", spec.net.forest_radius()),
                   {"r", "contact_mc", "contact_std_error", "nn_mc", "nn_std_error", "pooled_3sigma"});
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    const auto& c = contact.points[i];
    const auto& n = nn.points[i];
    table.add_row({spec.grid[i], c.estimate, c.std_error, n.estimate, n.std_error,
                   3.0 * std::hypot(c.std_error, n.std_error)});
  }
  return table;
}

/// Largest pointwise gap between one value column of each table over a shared grid.
inline double ks_statistic(const CurveTable& a, const CurveTable& b, std::size_t column_a = 1,
                           std::size_t column_b = 1) {
  if (a.rows.size() != b.rows.size()) throw DomainError("tables have different grids");
  double gap = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].front() != b.rows[i].front()) throw DomainError("tables have different grids");
    gap = std::max(gap, std::abs(a.rows[i].at(column_a) - b.rows[i].at(column_b)));
  }
  return gap;
}

// ---------------------------------------------------------------------------
// Figure presets

struct RunOptions {
  std::size_t n_samples = kDefaultSamples;
  mc::SeedSpec seed;
  QuadratureSpec quad;
};

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"};
  return names;
}

inline ExperimentSpec make_spec(NetworkModel net, EventModel ev, std::vector<double> grid,
                                const RunOptions& opt) {
  return ExperimentSpec{net, ev, std::move(grid), opt.n_samples, opt.seed, opt.quad};
}

inline std::vector<CurveTable> run_figure(const std::string& name, const RunOptions& opt = {}) {
  std::vector<CurveTable> out;
  if (name == "fig2" || name == "fig3") {
    for (double rd : {5.0, 10.0}) {
      const NetworkModel net(rd, 5.0, 0.0);
      const auto spec = make_spec(net, EventModel(1.0), default_r_grid(net), opt);
      out.push_back(name == "fig2" ? run_cdf_experiment(spec) : run_bound_deviation(spec));
    }
  } else if (name == "fig4") {
    const NetworkModel net(10.0, 10.0, 1.0);
    const EventModel ev(1.0);
    out.push_back(run_sensing_curve(make_spec(net, ev, default_t_grid(net, ev), opt)));
  } else if (name == "fig5") {
    for (double rd : {10.0, 20.0}) {
      const NetworkModel net(rd, 10.0, 1.0);
      const EventModel ev(1.0);
      out.push_back(run_sensing_deviation(make_spec(net, ev, default_t_grid(net, ev), opt)));
    }
  } else if (name == "fig6") {
    const NetworkModel net(40.0, 40.0, 1.0);
    const EventModel ev(0.5);
    const std::vector<double> rs_list{1.0, 2.0, 4.0};
    out.push_back(run_range_sweep(make_spec(net, ev, default_t_grid(net, ev), opt), rs_list));
  } else if (name == "fig7") {
    const NetworkModel net(40.0, 10.0, 1.0);
    const EventModel ev(0.5);
    const std::vector<double> m_list{5.0, 10.0, 20.0, 40.0};
    out.push_back(run_tradeoff(40.0, m_list, 10.0, make_spec(net, ev, {10.0}, opt)));
  } else {
    throw DomainError("unknown figure '" + name + "'");
  }
  return out;
}

}  // namespace forest_sense::experiments
