#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "motivsim/env.h"
#include "motivsim/features.h"
#include "motivsim/learner.h"
#include "motivsim/motivation.h"

namespace motivsim {

struct ExperimentConfig {
  std::string id;  // "EXP01" .. "EXP12"
  RewardModel reward_model = RewardModel::M1;
  Metabolism metabolism = Metabolism::Slow;
  RechargeScheme recharge_scheme = RechargeScheme::Same;
  int training_episodes = 25000;
  int max_train_steps = 5000;
  int test_episodes = 50;
  int max_test_steps = 8000;
  std::uint64_t seed = 0;
  // Seeds the test starts. Experiments sharing it (and a metabolism) get the
  // same starts.
  std::uint64_t suite_seed = 0;
  Hyperparameters hp;
  NeedConfig need;
  FeatureOptions features;

  void validate() const;
};

inline constexpr int kNumExperiments = 12;

/// Experiment table: EXP01-06 use M1, EXP07-12 M2; metabolism cycles
/// slow/regular/fast; recharge is "same" for 01-03 and 07-09, "different"
/// otherwise. suite_seed defaults to `seed`.
ExperimentConfig build_config(std::string_view id, std::uint64_t seed);

std::vector<std::string> experiment_ids();

/// Changes the number of training episodes and stretches the exploration
/// schedule over the new count.
void set_training_episodes(ExperimentConfig& config, int episodes);

struct StepRecord {
  double drive = 0.0;
  int x = 0;
  int y = 0;
  int station_contact = -1;  // station index, -1 off-station
};

struct EpisodeLog {
  int episode = 0;
  double cumulative_reward = 0.0;
  int steps = 0;
  bool died = false;
  // Steps spent on each station; the last slot counts off-station steps.
  std::vector<std::int64_t> contact_steps;
  // Per-step records, only kept when tracing (always for test episodes).
  std::vector<StepRecord> trace;
};

/// Visit counts of a traced episode, row-major (y * width + x).
std::vector<std::int64_t> visit_counts(const EpisodeLog& log, const GridConfig& grid);

struct VisitGrid {
  int width = 0;
  int height = 0;
  std::vector<std::int64_t> counts;  // row-major

  VisitGrid() = default;
  VisitGrid(int w, int h) : width(w), height(h), counts(static_cast<std::size_t>(w * h), 0) {}

  std::int64_t& at(int x, int y) { return counts[static_cast<std::size_t>(y * width + x)]; }
  std::int64_t at(int x, int y) const { return counts[static_cast<std::size_t>(y * width + x)]; }
  std::int64_t total() const;

  bool operator==(const VisitGrid&) const = default;
};

struct EpisodeSettings {
  const GridConfig* grid = nullptr;
  MetabolismProfile metabolism;
  RewardModel reward_model = RewardModel::M1;
  NeedConfig need;
  Hyperparameters hp;
  int max_steps = 0;
  double epsilon = 0.0;
  bool learn = false;
  bool trace = false;
};

/// One episode from `start`: select, step, reward, optionally learn, until
/// the energy runs out or max_steps is reached. Reaching max_steps is a
/// truncation, so the last update still bootstraps.
EpisodeLog run_episode(WeightTable& weights, const FeatureEncoder& encoder,
                       const EpisodeSettings& settings, AgentState start, Rng& policy_rng,
                       VisitGrid* visits = nullptr);

struct TrainingResult {
  WeightTable weights;
  std::vector<EpisodeLog> episodes;
  VisitGrid visits;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

/// Full training protocol. Throws DivergenceError (with the episode number)
/// if the weights stop being finite.
TrainingResult run_training(const ExperimentConfig& config, const GridConfig& grid,
                            const FeatureEncoder& encoder, const EpisodeCallback& on_episode = {});
TrainingResult run_training(const ExperimentConfig& config, const GridConfig& grid,
                            const EpisodeCallback& on_episode = {});

struct TestInit {
  int x = 0;
  int y = 0;
  double energy = 30.0;
};

/// `count` distinct start cells from which a station is reachable before the
/// energy drops from homeostasis to zero: ceil(min distance) * decay <
/// homeostasis. Shuffled with a seed derived from `suite_seed` and the
/// metabolism name only. Throws ConfigError if too few cells qualify.
std::vector<TestInit> reachable_starts(const MetabolismProfile& metabolism,
                                       const GridConfig& grid, std::size_t count,
                                       std::uint64_t suite_seed, const NeedConfig& need = {});
std::vector<TestInit> reachable_starts(const ExperimentConfig& config, const GridConfig& grid,
                                       std::size_t count);

/// Greedy rollouts with frozen weights, one traced log per start.
std::vector<EpisodeLog> run_test(const ExperimentConfig& config, const GridConfig& grid,
                                 const WeightTable& weights, const std::vector<TestInit>& inits);

}  // namespace motivsim
