#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "uavmec/errors.hpp"
#include "uavmec/rng.hpp"

namespace uavmec {

struct Intersection {
  int id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Lane {
  int id = 0;
  int from = 0;
  int to = 0;
  double length = 0.0;       // m
  double speed_limit = 0.0;  // m/s
};

struct LaneNetwork {
  std::vector<Intersection> intersections;
  std::vector<Lane> lanes;

  const Intersection* find_intersection(int id) const {
    for (const auto& i : intersections)
      if (i.id == id) return &i;
    return nullptr;
  }
  const Lane* find_lane(int id) const {
    for (const auto& l : lanes)
      if (l.id == id) return &l;
    return nullptr;
  }

  std::vector<int> incident_lanes(int intersection_id) const {
    std::vector<int> out;
    for (const auto& l : lanes)
      if (l.from == intersection_id || l.to == intersection_id)
        out.push_back(l.id);
    return out;
  }

  // geometric=true additionally checks lane lengths against endpoint
  // distance; imported networks may model curved lanes, synthetic grids
  // must not.
  void validate(bool geometric = false) const {
    for (const auto& l : lanes) {
      const Intersection* a = find_intersection(l.from);
      const Intersection* b = find_intersection(l.to);
      if (!a || !b)
        throw ConfigError("lane " + std::to_string(l.id) +
                          " references unknown intersection");
      if (!(l.length > 0.0))
        throw ConfigError("lane " + std::to_string(l.id) +
                          " has non-positive length");
      if (geometric) {
        const double d = std::hypot(a->x - b->x, a->y - b->y);
        if (std::abs(d - l.length) > 1e-6 * std::max(1.0, l.length))
          throw ConfigError("lane " + std::to_string(l.id) +
                            " length disagrees with endpoint geometry");
      }
    }
  }
};

struct VehicleObs {
  int vehicle_id = 0;
  double x = 0.0;
  double y = 0.0;
  int lane_id = 0;

  friend bool operator==(const VehicleObs&, const VehicleObs&) = default;
};

struct TraceFrame {
  int t = 0;
  std::vector<VehicleObs> vehicles;

  friend bool operator==(const TraceFrame&, const TraceFrame&) = default;
};

// ---------------------------------------------------------------------------
// Synthetic grid

// rows x cols Manhattan grid; lanes connect 4-adjacent intersections.
// Intersection id = row * cols + col.
inline LaneNetwork make_grid_network(int rows, int cols,
                                     double spacing = 100.0,
                                     double speed_limit = 60.0 / 3.6) {
  if (rows < 2 || cols < 2)
    throw ConfigError("grid network needs rows >= 2 and cols >= 2");
  LaneNetwork net;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      net.intersections.push_back({r * cols + c, c * spacing, r * spacing});
  int lane_id = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols)
        net.lanes.push_back(
            {lane_id++, r * cols + c, r * cols + c + 1, spacing, speed_limit});
      if (r + 1 < rows)
        net.lanes.push_back(
            {lane_id++, r * cols + c, (r + 1) * cols + c, spacing, speed_limit});
    }
  return net;
}

namespace detail {

struct WalkState {
  int lane_idx;    // index into net.lanes
  int dir;         // +1 toward `to`, -1 toward `from`
  double offset;   // m from the `from` endpoint
  double speed;    // m/s, fixed per vehicle
};

inline VehicleObs walk_position(const LaneNetwork& net, const WalkState& w,
                                int vehicle_id) {
  const Lane& l = net.lanes[w.lane_idx];
  const Intersection* a = net.find_intersection(l.from);
  const Intersection* b = net.find_intersection(l.to);
  const double f = w.offset / l.length;
  return {vehicle_id, a->x + f * (b->x - a->x), a->y + f * (b->y - a->y),
          l.id};
}

}  // namespace detail

// Random-turn walks on the grid at fixed per-vehicle speeds; never leaves
// the map. Frames cover slots 0..horizon inclusive, one second per slot.
inline std::vector<TraceFrame> generate_grid_traces(
    int rows, int cols, int num_vehicles, int horizon, std::uint64_t seed,
    double spacing = 100.0, double speed_limit = 60.0 / 3.6) {
  if (num_vehicles < 1) throw ConfigError("need at least one vehicle");
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
  const LaneNetwork net = make_grid_network(rows, cols, spacing, speed_limit);

  constexpr double kHeadway = 5.0;
  std::vector<std::pair<int, int>> slots;  // (lane index, slot index)
  for (std::size_t li = 0; li < net.lanes.size(); ++li) {
    const int n = static_cast<int>(net.lanes[li].length / kHeadway);
    for (int s = 0; s < n; ++s) slots.emplace_back(static_cast<int>(li), s);
  }
  if (static_cast<std::size_t>(num_vehicles) > slots.size())
    throw ConfigError("vehicle count exceeds lane capacity at 5 m headway");

  Rng rng(seed);
  // partial Fisher-Yates: first num_vehicles entries become the placement
  for (int i = 0; i < num_vehicles; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.uniform_int(slots.size() - i));
    std::swap(slots[i], slots[j]);
  }

  std::vector<detail::WalkState> walkers;
  walkers.reserve(num_vehicles);
  for (int v = 0; v < num_vehicles; ++v) {
    const auto [lane_idx, slot] = slots[v];
    const Lane& l = net.lanes[lane_idx];
    double offset = std::min(slot * kHeadway + kHeadway / 2, l.length);
    const int dir = rng.uniform() < 0.5 ? 1 : -1;
    const double speed = rng.uniform(0.4, 1.0) * l.speed_limit;
    walkers.push_back({lane_idx, dir, offset, speed});
  }

  std::unordered_map<int, int> lane_index;
  for (std::size_t li = 0; li < net.lanes.size(); ++li)
    lane_index[net.lanes[li].id] = static_cast<int>(li);

  std::vector<TraceFrame> frames;
  frames.reserve(horizon + 1);
  for (int t = 0; t <= horizon; ++t) {
    TraceFrame frame{t, {}};
    frame.vehicles.reserve(num_vehicles);
    for (int v = 0; v < num_vehicles; ++v)
      frame.vehicles.push_back(detail::walk_position(net, walkers[v], v));
    frames.push_back(std::move(frame));
    if (t == horizon) break;

    for (auto& w : walkers) {
      const Lane& l = net.lanes[w.lane_idx];
      double pos = w.offset + w.dir * w.speed;
      if (pos >= 0.0 && pos <= l.length) {
        w.offset = pos;
        continue;
      }
      // arrived at an intersection; pick a new lane, avoiding an immediate
      // U-turn unless the intersection is a dead end
      const int node = pos < 0.0 ? l.from : l.to;
      const double leftover =
          std::min(pos < 0.0 ? -pos : pos - l.length, w.speed);
      std::vector<int> candidates;
      for (std::size_t li = 0; li < net.lanes.size(); ++li) {
        if (static_cast<int>(li) == w.lane_idx) continue;
        if (net.lanes[li].from == node || net.lanes[li].to == node)
          candidates.push_back(static_cast<int>(li));
      }
      if (candidates.empty()) candidates.push_back(w.lane_idx);
      w.lane_idx = candidates[rng.uniform_int(candidates.size())];
      const Lane& nl = net.lanes[w.lane_idx];
      if (nl.from == node) {
        w.dir = 1;
        w.offset = std::min(leftover, nl.length);
      } else {
        w.dir = -1;
        w.offset = nl.length - std::min(leftover, nl.length);
      }
    }
  }
  return frames;
}

// ---------------------------------------------------------------------------
// Density monitoring

// D_k = (vehicles on incident lanes) / (total incident lane length)
inline double block_density(const TraceFrame& frame, const LaneNetwork& net,
                            int intersection_id) {
  if (!net.find_intersection(intersection_id))
    throw std::invalid_argument("block_density: unknown intersection");
  const std::vector<int> incident = net.incident_lanes(intersection_id);
  if (incident.empty())
    throw std::invalid_argument("block_density: intersection has no lanes");
  double total_length = 0.0;
  for (int id : incident) total_length += net.find_lane(id)->length;
  int count = 0;
  for (const auto& v : frame.vehicles)
    if (std::find(incident.begin(), incident.end(), v.lane_id) !=
        incident.end())
      ++count;
  return count / total_length;
}

// Blocks whose density strictly exceeds the threshold, sorted by id. A
// non-empty result signals that UAVs should deploy.
inline std::vector<int> detect_shortage(const TraceFrame& frame,
                                        const LaneNetwork& net,
                                        double threshold) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("detect_shortage: threshold must be > 0");
  std::vector<int> out;
  for (const auto& i : net.intersections)
    if (!net.incident_lanes(i.id).empty() &&
        block_density(frame, net, i.id) > threshold)
      out.push_back(i.id);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Formats

namespace detail {
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string("bad numeric field in ") + what + ": " +
                      std::string(s));
  return v;
}

inline long parse_int(std::string_view s, const char* what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(std::string("bad integer field in ") + what + ": " +
                      std::string(s));
  return v;
}

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}
}  // namespace detail

inline constexpr const char* kTraceCsvHeader = "t,vehicle_id,x,y,lane_id";

// Rows sorted by (t, vehicle_id), LF line endings, shortest round-trip
// float formatting.
inline void write_trace_csv(std::ostream& os,
                            const std::vector<TraceFrame>& frames) {
  os << kTraceCsvHeader << '\n';
  for (const auto& f : frames) {
    std::vector<const VehicleObs*> sorted;
    sorted.reserve(f.vehicles.size());
    for (const auto& v : f.vehicles) sorted.push_back(&v);
    std::sort(sorted.begin(), sorted.end(),
              [](const VehicleObs* a, const VehicleObs* b) {
                return a->vehicle_id < b->vehicle_id;
              });
    for (const VehicleObs* v : sorted)
      os << f.t << ',' << v->vehicle_id << ','
         << detail::format_double(v->x) << ',' << detail::format_double(v->y)
         << ',' << v->lane_id << '\n';
  }
}

inline std::vector<TraceFrame> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceCsvHeader)
    throw ConfigError("trace CSV: missing or malformed header");
  std::vector<TraceFrame> frames;
  int prev_t = -1, prev_vehicle = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv_row(line);
    if (fields.size() != 5)
      throw ConfigError("trace CSV: expected 5 fields, got row '" + line +
                        "'");
    const int t = static_cast<int>(detail::parse_int(fields[0], "trace CSV"));
    const int vid =
        static_cast<int>(detail::parse_int(fields[1], "trace CSV"));
    if (t < 0) throw ConfigError("trace CSV: negative slot index");
    if (t < prev_t || (t == prev_t && vid <= prev_vehicle))
      throw ConfigError("trace CSV: rows must be sorted by (t, vehicle_id)");
    if (t > prev_t + 1)
      throw ConfigError("trace CSV: slot indices must be contiguous");
    if (t != prev_t) frames.push_back({t, {}});
    frames.back().vehicles.push_back(
        {vid, detail::parse_double(fields[2], "trace CSV"),
         detail::parse_double(fields[3], "trace CSV"),
         static_cast<int>(detail::parse_int(fields[4], "trace CSV"))});
    prev_t = t;
    prev_vehicle = vid;
  }
  if (frames.empty()) throw ConfigError("trace CSV: no frames");
  if (frames.front().t != 0) throw ConfigError("trace CSV: must start at t=0");
  return frames;
}

inline void write_trace_csv_file(const std::string& path,
                                 const std::vector<TraceFrame>& frames) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open trace file for writing: " + path);
  write_trace_csv(os, frames);
}

inline std::vector<TraceFrame> read_trace_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open trace file: " + path);
  return read_trace_csv(is);
}

// Checks the on-segment invariant of every frame against a network.
inline void validate_frames(const std::vector<TraceFrame>& frames,
                            const LaneNetwork& net, double tolerance = 0.5) {
  for (const auto& f : frames)
    for (const auto& v : f.vehicles) {
      const Lane* l = net.find_lane(v.lane_id);
      if (!l)
        throw ConfigError("frame " + std::to_string(f.t) +
                          ": unknown lane id " + std::to_string(v.lane_id));
      const Intersection* a = net.find_intersection(l->from);
      const Intersection* b = net.find_intersection(l->to);
      const double abx = b->x - a->x, aby = b->y - a->y;
      const double len2 = abx * abx + aby * aby;
      double s = len2 > 0.0
                     ? ((v.x - a->x) * abx + (v.y - a->y) * aby) / len2
                     : 0.0;
      s = std::clamp(s, 0.0, 1.0);
      const double dx = v.x - (a->x + s * abx), dy = v.y - (a->y + s * aby);
      if (std::hypot(dx, dy) > tolerance)
        throw ConfigError("frame " + std::to_string(f.t) + ": vehicle " +
                          std::to_string(v.vehicle_id) + " is off its lane");
    }
}

inline void to_json(nlohmann::json& j, const Intersection& i) {
  j = {{"id", i.id}, {"x", i.x}, {"y", i.y}};
}
inline void from_json(const nlohmann::json& j, Intersection& i) {
  j.at("id").get_to(i.id);
  j.at("x").get_to(i.x);
  j.at("y").get_to(i.y);
}
inline void to_json(nlohmann::json& j, const Lane& l) {
  j = {{"id", l.id},
       {"from", l.from},
       {"to", l.to},
       {"length", l.length},
       {"speed_limit", l.speed_limit}};
}
inline void from_json(const nlohmann::json& j, Lane& l) {
  j.at("id").get_to(l.id);
  j.at("from").get_to(l.from);
  j.at("to").get_to(l.to);
  j.at("length").get_to(l.length);
  j.at("speed_limit").get_to(l.speed_limit);
}
inline void to_json(nlohmann::json& j, const LaneNetwork& n) {
  j = {{"intersections", n.intersections}, {"lanes", n.lanes}};
}
inline void from_json(const nlohmann::json& j, LaneNetwork& n) {
  j.at("intersections").get_to(n.intersections);
  j.at("lanes").get_to(n.lanes);
}

inline LaneNetwork read_network_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open lane network file: " + path);
  nlohmann::json j;
  try {
    is >> j;
    LaneNetwork net = j.get<LaneNetwork>();
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad lane network JSON " + path + ": " + e.what());
  }
}

inline void write_network_json_file(const std::string& path,
                                    const LaneNetwork& net) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open network file for writing: " + path);
  os << nlohmann::json(net).dump(2) << '\n';
}

}  // namespace uavmec
