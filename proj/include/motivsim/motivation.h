#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "motivsim/env.h"

namespace motivsim {

/// Setpoint of the energy need and the penalty gain applied above it.
struct NeedConfig {
  double homeostasis_level = 30.0;
  double overshoot_gain = 0.5;

  void validate(double battery_max) const;
};

/// Survival drive: signed distance of the energy level from homeostasis.
/// Negative is a deficit, positive a surplus.
struct Drive {
  double value = 0.0;
};

/// M1 rewards drive reduction only; M2 adds the hedonic value of the station
/// the agent is standing on.
enum class RewardModel { M1, M2 };

std::string_view reward_model_name(RewardModel m);

Drive drive(double energy, const NeedConfig& need = {});

/// 1 inside the homeostatic band |d| < 1 (the drive truncates to zero),
/// d below it and -gain * d above it. The band check runs first.
double reward_m1(Drive d, const NeedConfig& need = {});

/// reward_m1 plus the pleasure of the contacted station, if any.
/// Throws ConfigError for a contact index outside `stations`.
double reward_m2(Drive d, std::optional<std::size_t> station_contact,
                 std::span<const StationSpec> stations, const NeedConfig& need = {});

double reward(RewardModel model, Drive d, std::optional<std::size_t> station_contact,
              std::span<const StationSpec> stations, const NeedConfig& need = {});

}  // namespace motivsim
