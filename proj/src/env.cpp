#include "motivsim/env.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace motivsim {

namespace {

constexpr std::array<std::string_view, kNumActions> kActionNames = {"Stop", "Up", "Down", "Left",
                                                                     "Right"};

// Squared distance from (x, y) to the closest cell of a rectangle. Integer, so
// ties between stations compare exactly.
long long squared_gap(int x, int y, const CellRect& r, int* cx, int* cy) {
  const int px = std::clamp(x, r.x0, r.x1);
  const int py = std::clamp(y, r.y0, r.y1);
  if (cx) *cx = px;
  if (cy) *cy = py;
  const long long dx = px - x;
  const long long dy = py - y;
  return dx * dx + dy * dy;
}

}  // namespace

std::string_view action_name(Action a) { return kActionNames[static_cast<std::size_t>(a)]; }

Action action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumActions; ++i) {
    if (kActionNames[i] == name) return kActions[i];
  }
  throw ConfigError("unknown action '" + std::string(name) + "'");
}

void GridConfig::validate() const {
  if (width < 2 || height < 2) throw ConfigError("grid must be at least 2x2");
  if (!(detection_range > 0.0)) throw ConfigError("detection_range must be > 0");
  if (!(battery_max > 0.0)) throw ConfigError("battery_max must be > 0");
  if (stations.empty()) throw ConfigError("at least one station is required");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto& s = stations[i];
    const auto& r = s.region;
    if (r.x0 > r.x1 || r.y0 > r.y1) {
      throw ConfigError(std::string("station ") + s.id + " has an empty region");
    }
    if (r.x0 < 0 || r.y0 < 0 || r.x1 >= width || r.y1 >= height) {
      throw ConfigError(std::string("station ") + s.id + " lies outside the grid");
    }
    if (!(s.recharge_rate > 0.0)) {
      throw ConfigError(std::string("station ") + s.id + " needs a positive recharge rate");
    }
    if (!(s.hedonic_value >= 0.0)) {
      throw ConfigError(std::string("station ") + s.id + " has a negative hedonic value");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (stations[j].id == s.id) throw ConfigError(std::string("duplicate station id ") + s.id);
      if (stations[j].region.intersects(r)) {
        throw ConfigError(std::string("stations ") + stations[j].id + " and " + s.id +
                          " overlap");
      }
    }
  }
}

std::optional<std::size_t> GridConfig::station_at(int x, int y) const {
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (stations[i].region.contains(x, y)) return i;
  }
  return std::nullopt;
}

std::size_t GridConfig::station_index(char id) const {
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (stations[i].id == id) return i;
  }
  throw ConfigError(std::string("unknown station id '") + id + "'");
}

std::string_view scheme_name(RechargeScheme s) {
  return s == RechargeScheme::Same ? "same" : "different";
}

GridConfig Layout::grid(RechargeScheme scheme) const {
  GridConfig g;
  g.width = width;
  g.height = height;
  g.detection_range = detection_range;
  g.battery_max = battery_max;
  g.stations.reserve(stations.size());
  for (const auto& s : stations) {
    g.stations.push_back(StationSpec{
        s.id, s.region, scheme == RechargeScheme::Same ? s.recharge_same : s.recharge_diff,
        s.pleasure});
  }
  g.validate();
  return g;
}

Layout default_layout() {
  Layout l;
  l.stations = {
      {'A', {2, 15, 3, 16}, 3.0, 1.0, 3.0},
      {'B', {16, 15, 17, 16}, 3.0, 4.0, 2.0},
      {'C', {2, 3, 3, 4}, 3.0, 3.0, 4.0},
      {'D', {16, 3, 17, 4}, 3.0, 2.0, 1.0},
  };
  return l;
}

Layout parse_layout(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("layout is not valid JSON: ") + e.what());
  }
  Layout l;
  try {
    l.width = doc.at("width").get<int>();
    l.height = doc.at("height").get<int>();
    l.detection_range = doc.value("detection_range", 6.0);
    l.battery_max = doc.value("battery_max", 50.0);
    for (const auto& s : doc.at("stations")) {
      const auto id = s.at("id").get<std::string>();
      if (id.size() != 1) throw ConfigError("station id must be a single character: " + id);
      StationLayout st;
      st.id = id[0];
      st.region = {s.at("x0").get<int>(), s.at("y0").get<int>(), s.at("x1").get<int>(),
                   s.at("y1").get<int>()};
      st.recharge_same = s.at("recharge_same").get<double>();
      st.recharge_diff = s.at("recharge_diff").get<double>();
      st.pleasure = s.at("pleasure").get<double>();
      l.stations.push_back(st);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed layout: ") + e.what());
  }
  // Both schemes must produce a valid grid.
  (void)l.grid(RechargeScheme::Same);
  (void)l.grid(RechargeScheme::Different);
  return l;
}

Layout load_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open layout file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_layout(buf.str());
}

std::string layout_to_json(const Layout& layout) {
  nlohmann::ordered_json doc;
  doc["width"] = layout.width;
  doc["height"] = layout.height;
  doc["detection_range"] = layout.detection_range;
  doc["battery_max"] = layout.battery_max;
  doc["stations"] = nlohmann::ordered_json::array();
  for (const auto& s : layout.stations) {
    nlohmann::ordered_json j;
    j["id"] = std::string(1, s.id);
    j["x0"] = s.region.x0;
    j["y0"] = s.region.y0;
    j["x1"] = s.region.x1;
    j["y1"] = s.region.y1;
    j["recharge_same"] = s.recharge_same;
    j["recharge_diff"] = s.recharge_diff;
    j["pleasure"] = s.pleasure;
    doc["stations"].push_back(j);
  }
  return doc.dump(2);
}

MetabolismProfile metabolism_profile(Metabolism m) {
  switch (m) {
    case Metabolism::Slow:
      return {"slow", 0.1};
    case Metabolism::Regular:
      return {"regular", 1.0};
    case Metabolism::Fast:
      return {"fast", 3.0};
  }
  throw ConfigError("unknown metabolism");
}

Metabolism metabolism_from_name(std::string_view name) {
  if (name == "slow") return Metabolism::Slow;
  if (name == "regular") return Metabolism::Regular;
  if (name == "fast") return Metabolism::Fast;
  throw ConfigError("unknown metabolism '" + std::string(name) + "'");
}

StepOutcome step(const AgentState& state, Action action, const MetabolismProfile& metabolism,
                 const GridConfig& config) {
  if (state.x < 0 || state.x >= config.width || state.y < 0 || state.y >= config.height ||
      !(state.energy >= 0.0 && state.energy <= config.battery_max)) {
    throw std::invalid_argument("step: agent state violates its invariants");
  }
  AgentState next = state;
  switch (action) {
    case Action::Stop:
      break;
    case Action::Up:
      next.y = std::max(0, next.y - 1);
      break;
    case Action::Down:
      next.y = std::min(config.height - 1, next.y + 1);
      break;
    case Action::Left:
      next.x = std::max(0, next.x - 1);
      break;
    case Action::Right:
      next.x = std::min(config.width - 1, next.x + 1);
      break;
  }
  StepOutcome out;
  out.station_contact = config.station_at(next.x, next.y);
  double energy = state.energy - metabolism.decay;
  if (out.station_contact) energy += config.stations[*out.station_contact].recharge_rate;
  next.energy = std::clamp(energy, 0.0, config.battery_max);
  out.next_state = next;
  out.terminated = next.energy <= 0.0;
  return out;
}

AgentState reset(Rng& rng, const GridConfig& config) {
  AgentState s;
  s.energy = rng.uniform(0.0, config.battery_max);
  s.x = rng.uniform_int(0, config.width - 1);
  s.y = rng.uniform_int(0, config.height - 1);
  return s;
}

double station_distance(int x, int y, const StationSpec& station) {
  return std::sqrt(static_cast<double>(squared_gap(x, y, station.region, nullptr, nullptr)));
}

NearestStation nearest_station(const AgentState& state, const GridConfig& config) {
  NearestStation best;
  long long best_sq = std::numeric_limits<long long>::max();
  for (std::size_t i = 0; i < config.stations.size(); ++i) {
    int cx = 0;
    int cy = 0;
    const long long sq = squared_gap(state.x, state.y, config.stations[i].region, &cx, &cy);
    if (sq < best_sq) {
      best_sq = sq;
      best.station = i;
      best.cell_x = cx;
      best.cell_y = cy;
    }
  }
  best.distance = std::sqrt(static_cast<double>(best_sq));
  return best;
}

}  // namespace motivsim
