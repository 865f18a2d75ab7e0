#pragma once

// Monte Carlo simulator of the finite Boolean-Poisson sensor field with a
// uniformly placed, growing event.
//
// Realization i belongs to block i / kBlockSize, and every block draws from its
// own stream derived from the master seed. Shards only decide which thread
// runs which block, so estimates do not depend on the shard count or on
// scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "forest_sense/analytic.hpp"
#include "forest_sense/errors.hpp"
#include "forest_sense/geometry.hpp"
#include "forest_sense/rng.hpp"
#include "forest_sense/table.hpp"

namespace forest_sense::mc {

using geometry::Point2;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kBlockSize = 4096;

struct Realization {
  std::vector<Point2> sensors;
  Point2 event_origin;
};

struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::size_t shard_count = 1;
};

/// Wald interval half-width unit for a proportion.
inline EstimatorResult binomial_estimate(std::uint64_t hits, std::size_t n) {
  if (n == 0) throw DomainError("estimator needs at least one sample");
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

/// Estimates paired with the grid they were evaluated on.
struct EmpiricalCurve {
  std::vector<double> grid;
  std::vector<EstimatorResult> points;

  CurveTable to_table(std::string title, std::string abscissa, std::string value) const {
    CurveTable table(std::move(title), {std::move(abscissa), value, value + "_std_error"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      table.add_row({grid[i], points[i].estimate, points[i].std_error});
    }
    return table;
  }
};

// ---------------------------------------------------------------------------
// Samplers

inline Point2 sample_uniform_in_disk(double radius, rng::Engine& eng) {
  const double rho = radius * std::sqrt(rng::uniform01(eng));
  const double theta = 2.0 * std::numbers::pi * rng::uniform01(eng);
  return {rho * std::cos(theta), rho * std::sin(theta)};
}

inline std::vector<Point2> sample_fhppp(const NetworkModel& net, rng::Engine& eng) {
  const auto count = rng::poisson(eng, net.mean_sensors());
  std::vector<Point2> points;
  points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) points.push_back(sample_uniform_in_disk(net.forest_radius(), eng));
  return points;
}

inline Point2 sample_event_origin(const NetworkModel& net, rng::Engine& eng) {
  return sample_uniform_in_disk(net.forest_radius(), eng);
}

inline Realization sample_realization(const NetworkModel& net, rng::Engine& eng) {
  Realization real;
  real.sensors = sample_fhppp(net, eng);
  real.event_origin = sample_event_origin(net, eng);
  return real;
}

// ---------------------------------------------------------------------------
// Per-realization measurements

/// Distance from the event origin to the closest sensor; infinite when empty.
inline double contact_distance(const Realization& real) {
  double best = kInfinity;
  for (const auto& s : real.sensors) best = std::min(best, geometry::distance(s, real.event_origin));
  return best;
}

/// Distance from each sensor to its closest other sensor (infinite for a lone sensor).
inline std::vector<double> nearest_neighbor_distances(std::span<const Point2> sensors) {
  std::vector<double> nn(sensors.size(), kInfinity);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    for (std::size_t j = i + 1; j < sensors.size(); ++j) {
      const double d = geometry::distance(sensors[i], sensors[j]);
      nn[i] = std::min(nn[i], d);
      nn[j] = std::min(nn[j], d);
    }
  }
  return nn;
}

/// The event is sensed once some sensing disk touches the fire disk.
inline bool is_detected(const Realization& real, const NetworkModel& net, const EventModel& ev,
                        double t) {
  return contact_distance(real) <= ev.envelope_radius(t, net);
}

inline double detection_time(double contact, const NetworkModel& net, const EventModel& ev) {
  if (!(ev.speed() > 0.0)) throw DomainError("detection time needs a positive event speed");
  if (std::isinf(contact)) return kInfinity;
  return std::max(0.0, (contact - net.sensing_radius()) / ev.speed());
}

// ---------------------------------------------------------------------------
// Block runner

/// Calls visit(block_index, first_realization, count, engine) for every block,
/// fanning out over seed.shard_count threads.
template <class Visit>
void for_each_block(std::size_t n, const SeedSpec& seed, Visit&& visit) {
  if (n == 0) throw DomainError("sample count must be >= 1");
  const std::size_t blocks = (n + kBlockSize - 1) / kBlockSize;
  const auto run_block = [&](std::size_t b) {
    auto eng = rng::make_stream(seed.master_seed, b);
    const std::size_t first = b * kBlockSize;
    visit(b, first, std::min(kBlockSize, n - first), eng);
  };

  const std::size_t shards = std::clamp<std::size_t>(seed.shard_count, 1, blocks);
  if (shards == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(shards);
  for (std::size_t s = 0; s < shards; ++s) {
    workers.emplace_back([&] {
      for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
    });
  }
}

/// Contact distance of each of n realizations, in realization order.
inline std::vector<double> sample_contact_distances(const NetworkModel& net, std::size_t n,
                                                    const SeedSpec& seed) {
  std::vector<double> out(n);
  for_each_block(n, seed, [&](std::size_t, std::size_t first, std::size_t count, rng::Engine& eng) {
    for (std::size_t i = 0; i < count; ++i) out[first + i] = contact_distance(sample_realization(net, eng));
  });
  return out;
}

/// Fraction of distances <= each threshold.
inline EmpiricalCurve fraction_within(std::vector<double> distances, std::span<const double> thresholds) {
  std::sort(distances.begin(), distances.end());
  EmpiricalCurve curve;
  curve.grid.assign(thresholds.begin(), thresholds.end());
  for (double r : thresholds) {
    const auto hits = static_cast<std::uint64_t>(
        std::upper_bound(distances.begin(), distances.end(), r) - distances.begin());
    curve.points.push_back(binomial_estimate(hits, distances.size()));
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Estimators

inline EmpiricalCurve empirical_contact_cdf(const NetworkModel& net, std::span<const double> r_grid,
                                            std::size_t n, const SeedSpec& seed) {
  return fraction_within(sample_contact_distances(net, n, seed), r_grid);
}

/// Sums behind the nearest-neighbour CDF ratio estimator
/// E[#sensors with NN distance <= r] / E[#sensors]. All sums are integers, so
/// merging is exact and order-independent.
class NnAccumulator {
 public:
  explicit NnAccumulator(std::span<const double> r_grid)
      : grid_(r_grid.begin(), r_grid.end()),
        num_(grid_.size(), 0),
        num_sq_(grid_.size(), 0),
        num_den_(grid_.size(), 0) {}

  void add(const Realization& real) {
    ++realizations_;
    const std::uint64_t den = real.sensors.size();
    if (den == 0) return;
    auto nn = nearest_neighbor_distances(real.sensors);
    std::sort(nn.begin(), nn.end());
    den_ += den;
    den_sq_ += den * den;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      const auto num = static_cast<std::uint64_t>(
          std::upper_bound(nn.begin(), nn.end(), grid_[k]) - nn.begin());
      num_[k] += num;
      num_sq_[k] += num * num;
      num_den_[k] += num * den;
    }
  }

  void merge(const NnAccumulator& other) {
    realizations_ += other.realizations_;
    den_ += other.den_;
    den_sq_ += other.den_sq_;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      num_[k] += other.num_[k];
      num_sq_[k] += other.num_sq_[k];
      num_den_[k] += other.num_den_[k];
    }
  }

  /// Ratio estimate per grid point with a delta-method standard error.
  EmpiricalCurve result() const {
    if (realizations_ == 0) throw DomainError("no realizations accumulated");
    EmpiricalCurve curve;
    curve.grid = grid_;
    const double n = static_cast<double>(realizations_);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (den_ == 0) {
        curve.points.push_back({0.0, 0.0, realizations_});
        continue;
      }
      const double den = static_cast<double>(den_);
      const double p = static_cast<double>(num_[k]) / den;
      const double resid_sq = static_cast<double>(num_sq_[k]) -
                              2.0 * p * static_cast<double>(num_den_[k]) +
                              p * p * static_cast<double>(den_sq_);
      const double mean_den = den / n;
      const double var =
          realizations_ > 1 ? std::max(resid_sq, 0.0) / (n - 1.0) / (n * mean_den * mean_den) : 0.0;
      curve.points.push_back({p, std::sqrt(var), realizations_});
    }
    return curve;
  }

 private:
  std::vector<double> grid_;
  std::vector<std::uint64_t> num_, num_sq_, num_den_;
  std::uint64_t den_ = 0, den_sq_ = 0;
  std::size_t realizations_ = 0;
};

inline EmpiricalCurve empirical_nn_cdf(const NetworkModel& net, std::span<const double> r_grid,
                                       std::size_t n, const SeedSpec& seed) {
  const std::size_t blocks = n == 0 ? 0 : (n + kBlockSize - 1) / kBlockSize;
  std::vector<NnAccumulator> per_block(blocks, NnAccumulator(r_grid));
  for_each_block(n, seed, [&](std::size_t b, std::size_t, std::size_t count, rng::Engine& eng) {
    for (std::size_t i = 0; i < count; ++i) per_block[b].add(sample_realization(net, eng));
  });
  NnAccumulator total(r_grid);
  for (const auto& acc : per_block) total.merge(acc);
  return total.result();
}

/// Fraction of events sensed by each time; one set of realizations serves the
/// whole grid, so the curve is monotone in t.
inline EmpiricalCurve empirical_sensing_prob(const NetworkModel& net, const EventModel& ev,
                                             std::span<const double> t_grid, std::size_t n,
                                             const SeedSpec& seed) {
  std::vector<double> reach;
  reach.reserve(t_grid.size());
  for (double t : t_grid) reach.push_back(ev.envelope_radius(t, net));
  auto curve = fraction_within(sample_contact_distances(net, n, seed), reach);
  curve.grid.assign(t_grid.begin(), t_grid.end());
  return curve;
}

/// Time until the growing event first touches a sensing disk, per realization.
inline std::vector<double> empirical_detection_time(const NetworkModel& net, const EventModel& ev,
                                                    std::size_t n, const SeedSpec& seed) {
  auto times = sample_contact_distances(net, n, seed);
  for (double& d : times) d = detection_time(d, net, ev);
  return times;
}

/// Fraction of deployments with no sensor at all.
inline EstimatorResult empirical_void_fraction(const NetworkModel& net, std::size_t n,
                                               const SeedSpec& seed) {
  const auto distances = sample_contact_distances(net, n, seed);
  const auto empty =
      static_cast<std::uint64_t>(std::count_if(distances.begin(), distances.end(),
                                               [](double d) { return std::isinf(d); }));
  return binomial_estimate(empty, n);
}

}  // namespace forest_sense::mc
