// Time-to-detection for a small deployment, analytic against simulated.

#include <cstdio>
#include <vector>

#include "forest_sense/forest_sense.hpp"

int main() {
  using namespace forest_sense;
  const NetworkModel net(10.0, 10.0, 1.0);  // r_d, mean sensors, r_S
  const EventModel fire(1.0);               // envelope speed

  const std::vector<double> times{0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
  const auto sim = mc::empirical_sensing_prob(net, fire, times, 20000, {2024, 1});

  std::printf("%6s %10s %10s %10s %10s\n", "t", "lower", "exact", "upper", "simulated");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    std::printf("%6.1f %10.6f %10.6f %10.6f %10.6f\n", t, analytic::sensing_prob_lower(t, net, fire),
                analytic::sensing_prob(t, net, fire), analytic::sensing_prob_upper(t, net, fire),
                sim.points[i].estimate);
  }
  std::printf("coverage of a random point: %.6f\n", analytic::coverage_prob(net));
}
