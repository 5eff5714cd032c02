#include "motivsim/motivation.h"

#include <cmath>
#include <string>

namespace motivsim {

void NeedConfig::validate(double battery_max) const {
  if (!(homeostasis_level > 0.0 && homeostasis_level < battery_max)) {
    throw ConfigError("homeostasis level must lie strictly inside (0, battery_max)");
  }
  if (!(overshoot_gain > 0.0 && overshoot_gain <= 1.0)) {
    throw ConfigError("overshoot gain must lie in (0, 1]");
  }
}

std::string_view reward_model_name(RewardModel m) { return m == RewardModel::M1 ? "M1" : "M2"; }

Drive drive(double energy, const NeedConfig& need) {
  return Drive{energy - need.homeostasis_level};
}

double reward_m1(Drive d, const NeedConfig& need) {
  if (std::trunc(d.value) == 0.0) return 1.0;
  if (d.value < 0.0) return d.value;
  return -need.overshoot_gain * d.value;
}

double reward_m2(Drive d, std::optional<std::size_t> station_contact,
                 std::span<const StationSpec> stations, const NeedConfig& need) {
  const double base = reward_m1(d, need);
  if (!station_contact) return base;
  if (*station_contact >= stations.size()) {
    throw ConfigError("reward_m2: unknown station index " + std::to_string(*station_contact));
  }
  return base + stations[*station_contact].hedonic_value;
}

double reward(RewardModel model, Drive d, std::optional<std::size_t> station_contact,
              std::span<const StationSpec> stations, const NeedConfig& need) {
  return model == RewardModel::M1 ? reward_m1(d, need)
                                  : reward_m2(d, station_contact, stations, need);
}

}  // namespace motivsim
