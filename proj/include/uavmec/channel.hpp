#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uavmec {

struct Position {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double h = 0.0;  // m above ground, 0 for vehicles
};

// Physical-layer constants for the air/ground links. Defaults give a
// 10 MHz base station with 4 kW transmit power and a dimensionless channel
// power factor of 40; the noise density is a configuration choice.
struct RadioConfig {
  double bandwidth_bs = 10e6;   // W_BS, Hz
  int max_subchannels = 10;     // X
  double noise_density = 1e-3;  // n0, W/Hz
  double tx_power = 4000.0;     // p_t, W
  double channel_power = 40.0;  // p_c, dimensionless factor on p_t
  double los_b1 = 0.36;
  double los_b2 = 0.21;
  double los_offset = 0.0;      // zeta, degrees
  double path_loss_exp = 2.0;   // alpha
  double atten_los = 1.0;       // mu_LoS
  double atten_nlos = 20.0;     // mu_NLoS
  double carrier_freq = 2e9;    // f_c, Hz
  double light_speed = 299792458.0;  // c, m/s
  double snr_threshold = 1.0;   // gamma_vm, linear ratio
  double bs_height = 30.0;      // H_BS, m
  double uav_height = 100.0;    // H_u, m

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("RadioConfig: ") + name +
                                    " must be positive and finite");
    };
    positive(bandwidth_bs, "bandwidth_bs");
    positive(noise_density, "noise_density");
    positive(tx_power, "tx_power");
    positive(channel_power, "channel_power");
    positive(carrier_freq, "carrier_freq");
    positive(light_speed, "light_speed");
    positive(bs_height, "bs_height");
    positive(uav_height, "uav_height");
    positive(los_b1, "los_b1");
    positive(los_b2, "los_b2");
    if (max_subchannels < 1)
      throw std::invalid_argument("RadioConfig: max_subchannels must be >= 1");
    if (!(atten_los >= 1.0) || !(atten_nlos >= atten_los))
      throw std::invalid_argument(
          "RadioConfig: need atten_nlos >= atten_los >= 1");
    if (!(los_offset >= 0.0) || !(los_offset < 90.0))
      throw std::invalid_argument("RadioConfig: los_offset must be in [0,90)");
    if (!(snr_threshold >= 0.0))
      throw std::invalid_argument("RadioConfig: snr_threshold must be >= 0");
  }
};

namespace detail {
inline void require_finite(const Position& p, const char* what) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.h))
    throw std::invalid_argument(std::string(what) + ": non-finite position");
}
}  // namespace detail

// 3-D straight-line distance
inline double slant_distance(const Position& a, const Position& b) {
  detail::require_finite(a, "slant_distance");
  detail::require_finite(b, "slant_distance");
  const double dx = a.x - b.x, dy = a.y - b.y, dh = a.h - b.h;
  return std::sqrt(dx * dx + dy * dy + dh * dh);
}

// Per-vehicle download throughput from the BS, bit/s. The spectral share is
// always W_BS/M; the noise bandwidth is W_BS/M while fewer vehicles than
// subchannels are active and W_BS/X once the subchannel cap binds.
inline double bs_throughput(int num_vehicles, const RadioConfig& cfg) {
  if (num_vehicles < 1)
    throw std::invalid_argument("bs_throughput: need at least one vehicle");
  const double share = cfg.bandwidth_bs / static_cast<double>(num_vehicles);
  const double noise_bw = num_vehicles < cfg.max_subchannels
                              ? share
                              : cfg.bandwidth_bs / cfg.max_subchannels;
  const double ratio =
      cfg.tx_power * cfg.channel_power / (noise_bw * cfg.noise_density);
  return share * std::log2(1.0 + ratio);
}

// Elevation angle from a ground vehicle to a UAV, radians in (0, pi/2]
inline double elevation_angle(const Position& uav, const Position& vehicle) {
  if (!(uav.h > 0.0))
    throw std::invalid_argument("elevation_angle: uav height must be > 0");
  const double d = slant_distance(uav, vehicle);
  if (d == 0.0)
    throw std::invalid_argument("elevation_angle: coincident positions");
  return std::asin((uav.h - vehicle.h) / d);
}

// b1 * (theta_deg - zeta)^b2, clamped into [0,1]. Angles below the offset
// are clamped to probability 0 rather than producing NaN for fractional b2.
inline double los_probability(double theta, const RadioConfig& cfg) {
  if (!(theta > 0.0) || !(theta <= std::numbers::pi / 2 + 1e-12))
    throw std::invalid_argument("los_probability: theta outside (0, pi/2]");
  const double deg = theta * 180.0 / std::numbers::pi;
  const double base = deg - cfg.los_offset;
  if (base <= 0.0) return 0.0;
  const double p = cfg.los_b1 * std::pow(base, cfg.los_b2);
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

// Mixture channel gain, K0^-1 * d^-alpha * [P_LoS mu_LoS + P_NLoS mu_NLoS]
// with K0 = (2 pi f_c / c)^2.
inline double channel_gain(double distance, double theta,
                           const RadioConfig& cfg) {
  if (!(distance > 0.0))
    throw std::invalid_argument("channel_gain: distance must be > 0");
  const double k0 = std::pow(
      2.0 * std::numbers::pi * cfg.carrier_freq / cfg.light_speed, 2.0);
  const double p_los = los_probability(theta, cfg);
  const double mix = p_los * cfg.atten_los + (1.0 - p_los) * cfg.atten_nlos;
  return (1.0 / k0) * std::pow(distance, -cfg.path_loss_exp) * mix;
}

// Received SNR over AWGN of density n0 in the given per-vehicle bandwidth
inline double snr(const RadioConfig& cfg, double per_vehicle_bandwidth) {
  if (!(per_vehicle_bandwidth > 0.0))
    throw std::invalid_argument("snr: bandwidth must be > 0");
  const double sigma2 = per_vehicle_bandwidth * cfg.noise_density;
  return cfg.tx_power * cfg.channel_power / sigma2;
}

// Shannon rate, bit/s
inline double link_rate(double bandwidth, double snr_ratio) {
  if (!(bandwidth > 0.0))
    throw std::invalid_argument("link_rate: bandwidth must be > 0");
  if (!(snr_ratio >= 0.0))
    throw std::invalid_argument("link_rate: snr must be >= 0");
  return bandwidth * std::log2(1.0 + snr_ratio);
}

inline bool transmission_ok(double snr_ratio, const RadioConfig& cfg) {
  return snr_ratio >= cfg.snr_threshold;
}

}  // namespace uavmec
