#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace uavmec {

struct MosWeights {
  double w_delay = 0.0;  // lambda_1
  double w_rate = 1.0;   // lambda_2

  void validate() const {
    if (!(w_delay >= 0.0 && w_delay <= 1.0 && w_rate >= 0.0 && w_rate <= 1.0))
      throw std::invalid_argument("MosWeights: weights must lie in [0,1]");
    if (std::abs(w_delay + w_rate - 1.0) > 1e-12)
      throw std::invalid_argument("MosWeights: weights must sum to 1");
  }
};

// Log-linear rate-to-score mapping: MOS 1 at or below the floor rate, 5 at
// or above the ceiling rate.
struct MosRateMap {
  double rate_floor = 1e5;    // bit/s
  double rate_ceiling = 1e8;  // bit/s

  void validate() const {
    if (!(rate_floor > 0.0) || !(rate_ceiling > rate_floor))
      throw std::invalid_argument(
          "MosRateMap: need 0 < rate_floor < rate_ceiling");
  }
};

inline double mos_from_rate(double rate, const MosRateMap& map) {
  if (!(rate >= 0.0))
    throw std::invalid_argument("mos_from_rate: rate must be >= 0");
  if (rate <= map.rate_floor) return 1.0;
  if (rate >= map.rate_ceiling) return 5.0;
  const double frac = std::log(rate / map.rate_floor) /
                      std::log(map.rate_ceiling / map.rate_floor);
  return 1.0 + 4.0 * frac;
}

inline double mos_instant(double mos_rate, double mos_delay,
                          const MosWeights& w) {
  if (!(mos_rate >= 1.0 && mos_rate <= 5.0) ||
      !(mos_delay >= 1.0 && mos_delay <= 5.0))
    throw std::invalid_argument("mos_instant: scores must lie in [1,5]");
  return w.w_delay * mos_delay + w.w_rate * mos_rate;
}

// Sum over all slots and vehicles of a (horizon+1) x M score matrix
inline double mos_episode_total(
    const std::vector<std::vector<double>>& per_slot_per_vehicle,
    int horizon) {
  if (static_cast<int>(per_slot_per_vehicle.size()) != horizon + 1)
    throw std::invalid_argument("mos_episode_total: expected horizon+1 rows");
  const std::size_t m =
      per_slot_per_vehicle.empty() ? 0 : per_slot_per_vehicle.front().size();
  double total = 0.0;
  for (const auto& row : per_slot_per_vehicle) {
    if (row.size() != m)
      throw std::invalid_argument("mos_episode_total: ragged score matrix");
    for (double s : row) total += s;
  }
  return total;
}

}  // namespace uavmec
