#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "motivsim/env.h"
#include "motivsim/experiments.h"

namespace motivsim {

/// Mean and population standard deviation over one block of episodes.
struct WindowStat {
  std::size_t window = 0;
  std::size_t episodes = 0;  // block size; smaller for a trailing partial block
  double mean_reward = 0.0;
  double std_reward = 0.0;
  double mean_steps = 0.0;
  double std_steps = 0.0;
};

/// Non-overlapping blocks of `window` episodes. Throws std::invalid_argument
/// for empty logs or window == 0.
std::vector<WindowStat> window_stats(std::span<const EpisodeLog> logs, std::size_t window = 100);

struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<std::int64_t> counts;  // row-major
  std::vector<StationSpec> stations;
};

Heatmap make_heatmap(const VisitGrid& visits, const GridConfig& grid);

/// Fill colour of a station id (A blue, B orange, C green, D red).
std::string station_color(char id);

/// One rectangle per cell, intensity linear in count / max count; station
/// regions outlined in their colours.
std::string render_heatmap(const Heatmap& h);

/// Mean drive of each test episode over its steps; 0 for an episode with no
/// steps. Throws std::invalid_argument for empty input.
std::vector<double> drive_summary(std::span<const EpisodeLog> test_logs);

std::string drive_summary_csv(std::span<const double> mean_drives);

/// Bar per test, zero line marking homeostasis.
std::string render_drive_chart(std::span<const double> mean_drives);

/// Mean reward and mean steps per window with +/- one std bands.
std::string render_reward_curve(std::span<const WindowStat> stats);

/// Fraction of steps spent on each station over episodes [first, last), with
/// the off-station remainder in the final slot. Throws std::invalid_argument
/// for an empty or out-of-range episode range, or one with no steps.
std::vector<double> occupancy_by_station(std::span<const EpisodeLog> logs, std::size_t first,
                                         std::size_t last);

/// Number formatting shared by the CSV and SVG writers.
std::string format_number(double v, int precision = 6);

}  // namespace motivsim
