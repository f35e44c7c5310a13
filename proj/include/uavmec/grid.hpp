#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmec/errors.hpp"

namespace uavmec {

// Discrete flight volume. Coordinates are integers; adjacent coordinates
// are half a cube side apart, which is exactly one action step.
struct Lattice {
  int x_max = 10;
  int y_max = 10;
  int z_max = 1;
  double cell_size = 200.0;  // m, cube side length

  void validate() const {
    if (x_max < 1 || y_max < 1 || z_max < 1)
      throw std::invalid_argument("Lattice: dimensions must be >= 1");
    if (!(cell_size > 0.0))
      throw std::invalid_argument("Lattice: cell_size must be > 0");
  }
  double spacing() const { return cell_size / 2.0; }
  int num_cells() const { return x_max * y_max * z_max; }
};

struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Nine actions: the eight corners of the move cube plus stay. Indices 0-7
// enumerate (dz,dy,dx) in {+1,-1}^3 lexicographically with +1 first;
// index 8 is stay.
struct Action {
  int index = 8;

  static constexpr int kCount = 9;

  int dx() const { return index == 8 ? 0 : (index % 2 == 0 ? 1 : -1); }
  int dy() const { return index == 8 ? 0 : ((index / 2) % 2 == 0 ? 1 : -1); }
  int dz() const { return index == 8 ? 0 : (index < 4 ? 1 : -1); }

  void validate() const {
    if (index < 0 || index >= kCount)
      throw std::invalid_argument("Action: index must be in [0,8]");
  }
};

inline Cell apply_action(Cell c, Action a, const Lattice& lat) {
  a.validate();
  auto clamp = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };
  return {clamp(c.x + a.dx(), lat.x_max), clamp(c.y + a.dy(), lat.y_max),
          clamp(c.z + a.dz(), lat.z_max)};
}

// Row-major 2-D scalar field over the lattice footprint
struct GridField {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  GridField() = default;
  GridField(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const {
    return v[static_cast<std::size_t>(y) * width + x];
  }
  bool inside(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }

  friend bool operator==(const GridField&, const GridField&) = default;
};

// Plain-text occupancy map: one row per line, '.' free, '#' obstacle.
struct ObstacleMap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> blocked;

  ObstacleMap() = default;
  ObstacleMap(int w, int h)
      : width(w), height(h), blocked(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const {
    return blocked[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool b) {
    blocked[static_cast<std::size_t>(y) * width + x] = b ? 1 : 0;
  }
};

inline ObstacleMap parse_obstacle_map(std::istream& is) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw ConfigError("occupancy map: empty file");
  const std::size_t w = rows.front().size();
  ObstacleMap map(static_cast<int>(w), static_cast<int>(rows.size()));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    if (rows[y].size() != w)
      throw ConfigError("occupancy map: ragged row " + std::to_string(y));
    for (std::size_t x = 0; x < w; ++x) {
      const char c = rows[y][x];
      if (c == '#')
        map.set(static_cast<int>(x), static_cast<int>(y), true);
      else if (c != '.')
        throw ConfigError(std::string("occupancy map: bad character '") + c +
                          "'");
    }
  }
  return map;
}

inline ObstacleMap read_obstacle_map_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open occupancy map: " + path);
  return parse_obstacle_map(is);
}

// One time slot of the world as an agent population sees it. `field` holds
// the per-cell monitoring penalties in the monitoring task and the per-cell
// vehicle counts in the MEC task.
struct WorldState {
  std::vector<Cell> uav_cells;
  int frame_index = 0;
  double last_mos = 0.0;
  GridField field;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct StepResult {
  WorldState next;
  double reward = 0.0;
  bool done = false;
};

// Egocentric crop plus a mean-pooled global map, three channels each:
// field value, obstacle mask, other-agent count. Channel-major layout.
struct Observation {
  int window = 0;
  std::vector<double> crop;  // 3 * window * window
  int coarse_w = 0;
  int coarse_h = 0;
  std::vector<double> coarse;  // 3 * coarse_w * coarse_h

  std::size_t size() const { return crop.size() + coarse.size(); }
};

inline Observation observe(const GridField& field, const ObstacleMap& obstacles,
                           std::span<const Cell> agents, int agent, int window,
                           int coarse_factor) {
  if (agent < 0 || agent >= static_cast<int>(agents.size()))
    throw std::invalid_argument("observe: agent index out of range");
  if (window < 1 || window % 2 == 0)
    throw std::invalid_argument("observe: window must be odd and positive");
  if (coarse_factor < 1)
    throw std::invalid_argument("observe: coarse_factor must be >= 1");

  const int w = field.width, h = field.height;
  GridField others(w, h, 0.0);
  for (int i = 0; i < static_cast<int>(agents.size()); ++i) {
    if (i == agent) continue;
    if (others.inside(agents[i].x, agents[i].y))
      others.at(agents[i].x, agents[i].y) += 1.0;
  }

  Observation obs;
  obs.window = window;
  const int half = window / 2;
  const Cell me = agents[agent];
  obs.crop.resize(3 * static_cast<std::size_t>(window) * window, 0.0);
  const std::size_t plane = static_cast<std::size_t>(window) * window;
  for (int dy = -half; dy <= half; ++dy)
    for (int dx = -half; dx <= half; ++dx) {
      const int gx = me.x + dx, gy = me.y + dy;
      const std::size_t k =
          static_cast<std::size_t>(dy + half) * window + (dx + half);
      if (!field.inside(gx, gy)) continue;  // zero padding
      obs.crop[k] = field.at(gx, gy);
      obs.crop[plane + k] = obstacles.at(gx, gy) ? 1.0 : 0.0;
      obs.crop[2 * plane + k] = others.at(gx, gy);
    }

  obs.coarse_w = (w + coarse_factor - 1) / coarse_factor;
  obs.coarse_h = (h + coarse_factor - 1) / coarse_factor;
  const std::size_t cplane =
      static_cast<std::size_t>(obs.coarse_w) * obs.coarse_h;
  obs.coarse.resize(3 * cplane, 0.0);
  const double denom = static_cast<double>(coarse_factor) * coarse_factor;
  for (int cy = 0; cy < obs.coarse_h; ++cy)
    for (int cx = 0; cx < obs.coarse_w; ++cx) {
      double sf = 0.0, so = 0.0, sa = 0.0;
      for (int iy = 0; iy < coarse_factor; ++iy)
        for (int ix = 0; ix < coarse_factor; ++ix) {
          const int gx = cx * coarse_factor + ix;
          const int gy = cy * coarse_factor + iy;
          if (!field.inside(gx, gy)) continue;  // zero padding
          sf += field.at(gx, gy);
          so += obstacles.at(gx, gy) ? 1.0 : 0.0;
          sa += others.at(gx, gy);
        }
      const std::size_t k = static_cast<std::size_t>(cy) * obs.coarse_w + cx;
      obs.coarse[k] = sf / denom;
      obs.coarse[cplane + k] = so / denom;
      obs.coarse[2 * cplane + k] = sa / denom;
    }
  return obs;
}

// Sum of discount^n * rewards[n], accumulated backward
inline double discounted_return(std::span<const double> rewards,
                                double discount) {
  if (!(discount >= 0.0) || !(discount < 1.0))
    throw std::invalid_argument("discounted_return: discount outside [0,1)");
  double g = 0.0;
  for (auto it = rewards.rbegin(); it != rewards.rend(); ++it)
    g = *it + discount * g;
  return g;
}

}  // namespace uavmec
