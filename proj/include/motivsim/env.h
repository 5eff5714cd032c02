#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "motivsim/rng.h"

namespace motivsim {

/// Raised for malformed grids, layouts or experiment settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical order doubles as the tie-break order for greedy selection.
enum class Action : std::uint8_t { Stop = 0, Up, Down, Left, Right };

inline constexpr std::size_t kNumActions = 5;
inline constexpr std::array<Action, kNumActions> kActions = {
    Action::Stop, Action::Up, Action::Down, Action::Left, Action::Right};

std::string_view action_name(Action a);
Action action_from_name(std::string_view name);

/// Inclusive cell rectangle.
struct CellRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  int cell_count() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
  bool intersects(const CellRect& o) const {
    return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1;
  }
};

struct StationSpec {
  char id = 'A';
  CellRect region;
  double recharge_rate = 0.0;  // energy per step spent inside the region
  double hedonic_value = 0.0;  // pleasure added to the M2 reward on contact
};

struct GridConfig {
  int width = 20;
  int height = 20;
  std::vector<StationSpec> stations;
  double detection_range = 6.0;
  double battery_max = 50.0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  /// Index of the station whose region holds (x, y), if any.
  std::optional<std::size_t> station_at(int x, int y) const;

  /// Index of the station with the given id; throws ConfigError if unknown.
  std::size_t station_index(char id) const;
};

enum class RechargeScheme { Same, Different };

std::string_view scheme_name(RechargeScheme s);

/// Station entry of a layout document. Carries both recharge columns so one
/// layout serves both schemes.
struct StationLayout {
  char id = 'A';
  CellRect region;
  double recharge_same = 0.0;
  double recharge_diff = 0.0;
  double pleasure = 0.0;
};

/// Grid/station layout as read from JSON:
/// {width, height, detection_range, battery_max,
///  stations: [{id, x0, y0, x1, y1, recharge_same, recharge_diff, pleasure}]}
struct Layout {
  int width = 20;
  int height = 20;
  double detection_range = 6.0;
  double battery_max = 50.0;
  std::vector<StationLayout> stations;

  GridConfig grid(RechargeScheme scheme) const;
};

/// Four 2x2 stations near the corners; recharge and pleasure values of the
/// reference experiments.
Layout default_layout();

Layout parse_layout(std::string_view json_text);
Layout load_layout(const std::string& path);
std::string layout_to_json(const Layout& layout);

enum class Metabolism { Slow, Regular, Fast };

struct MetabolismProfile {
  std::string_view name;
  double decay = 1.0;  // energy lost per step
};

MetabolismProfile metabolism_profile(Metabolism m);
Metabolism metabolism_from_name(std::string_view name);

struct AgentState {
  int x = 0;
  int y = 0;
  double energy = 0.0;

  bool operator==(const AgentState&) const = default;
};

struct StepOutcome {
  AgentState next_state;
  std::optional<std::size_t> station_contact;  // index into GridConfig::stations
  bool terminated = false;                     // energy depleted
};

/// Move, pay the metabolic cost, recharge if the new cell is a station, clamp
/// to [0, battery_max]. Throws std::invalid_argument for an invalid state.
StepOutcome step(const AgentState& state, Action action, const MetabolismProfile& metabolism,
                 const GridConfig& config);

/// Random start: energy ~ U(0, battery_max), then x and y uniform over the grid.
AgentState reset(Rng& rng, const GridConfig& config);

struct NearestStation {
  std::size_t station = 0;
  double distance = 0.0;
  int cell_x = 0;  // closest cell of that station
  int cell_y = 0;
};

/// Closest station by Euclidean cell distance; ties go to the earlier station.
NearestStation nearest_station(const AgentState& state, const GridConfig& config);

/// Euclidean distance from (x, y) to the closest cell of one station.
double station_distance(int x, int y, const StationSpec& station);

}  // namespace motivsim
