#include "motivsim/experiments.h"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

namespace motivsim {

void ExperimentConfig::validate() const {
  if (training_episodes < 0) throw ConfigError("training_episodes must be >= 0");
  if (max_train_steps < 1) throw ConfigError("max_train_steps must be >= 1");
  if (test_episodes < 0) throw ConfigError("test_episodes must be >= 0");
  if (max_test_steps < 1) throw ConfigError("max_test_steps must be >= 1");
  hp.validate();
}

ExperimentConfig build_config(std::string_view id, std::uint64_t seed) {
  int n = 0;
  if (id.size() == 5 && id.substr(0, 3) == "EXP" && std::isdigit(id[3]) && std::isdigit(id[4])) {
    n = (id[3] - '0') * 10 + (id[4] - '0');
  }
  if (n < 1 || n > kNumExperiments) {
    throw ConfigError("unknown experiment id '" + std::string(id) + "' (expected EXP01..EXP12)");
  }
  ExperimentConfig c;
  c.id = std::string(id);
  const int k = n - 1;
  c.reward_model = k < 6 ? RewardModel::M1 : RewardModel::M2;
  c.metabolism = static_cast<Metabolism>(k % 3);
  c.recharge_scheme = (k % 6) < 3 ? RechargeScheme::Same : RechargeScheme::Different;
  c.seed = seed;
  c.suite_seed = seed;
  c.hp.epsilon_decay_horizon = c.training_episodes;
  return c;
}

std::vector<std::string> experiment_ids() {
  std::vector<std::string> ids;
  for (int i = 1; i <= kNumExperiments; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "EXP%02d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

void set_training_episodes(ExperimentConfig& config, int episodes) {
  config.training_episodes = episodes;
  config.hp.epsilon_decay_horizon = episodes;
}

std::int64_t VisitGrid::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::vector<std::int64_t> visit_counts(const EpisodeLog& log, const GridConfig& grid) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(grid.width * grid.height), 0);
  for (const auto& s : log.trace) ++counts[static_cast<std::size_t>(s.y * grid.width + s.x)];
  return counts;
}

EpisodeLog run_episode(WeightTable& weights, const FeatureEncoder& encoder,
                       const EpisodeSettings& settings, AgentState start, Rng& policy_rng,
                       VisitGrid* visits) {
  const GridConfig& grid = *settings.grid;
  const std::size_t n_stations = grid.stations.size();

  EpisodeLog log;
  log.contact_steps.assign(n_stations + 1, 0);

  std::vector<double> f(encoder.size());
  std::vector<double> f_next(encoder.size());
  AgentState state = start;
  encoder.encode(state, f);

  for (int t = 0; t < settings.max_steps; ++t) {
    const Action a = select_action(weights, f, settings.epsilon, policy_rng);
    const StepOutcome out = step(state, a, settings.metabolism, grid);
    const Drive d = drive(out.next_state.energy, settings.need);
    const double r =
        reward(settings.reward_model, d, out.station_contact, grid.stations, settings.need);
    encoder.encode(out.next_state, f_next);
    if (settings.learn) {
      const bool terminal = out.terminated && !settings.hp.bootstrap_on_depletion;
      td_update(weights, f, a, r, f_next, terminal, settings.hp);
    }

    ++log.steps;
    log.cumulative_reward += r;
    ++log.contact_steps[out.station_contact.value_or(n_stations)];
    if (visits) ++visits->at(out.next_state.x, out.next_state.y);
    if (settings.trace) {
      log.trace.push_back(StepRecord{
          d.value, out.next_state.x, out.next_state.y,
          out.station_contact ? static_cast<int>(*out.station_contact) : -1});
    }

    state = out.next_state;
    std::swap(f, f_next);
    if (out.terminated) {
      log.died = true;
      break;
    }
  }
  return log;
}

TrainingResult run_training(const ExperimentConfig& config, const GridConfig& grid,
                            const FeatureEncoder& encoder, const EpisodeCallback& on_episode) {
  config.validate();
  grid.validate();
  config.need.validate(grid.battery_max);

  Rng weight_rng(derive_seed(config.seed, "weights"));
  Rng reset_rng(derive_seed(config.seed, "resets"));
  Rng policy_rng(derive_seed(config.seed, "policy"));

  TrainingResult result;
  result.weights = init_weights(weight_rng, encoder.size());
  result.visits = VisitGrid(grid.width, grid.height);
  result.episodes.reserve(static_cast<std::size_t>(config.training_episodes));

  EpisodeSettings settings;
  settings.grid = &grid;
  settings.metabolism = metabolism_profile(config.metabolism);
  settings.reward_model = config.reward_model;
  settings.need = config.need;
  settings.hp = config.hp;
  settings.max_steps = config.max_train_steps;
  settings.learn = true;

  for (int e = 0; e < config.training_episodes; ++e) {
    settings.epsilon = epsilon_at(e, config.hp);
    const AgentState start = reset(reset_rng, grid);
    EpisodeLog log;
    try {
      log = run_episode(result.weights, encoder, settings, start, policy_rng, &result.visits);
    } catch (const DivergenceError& err) {
      throw DivergenceError(config.id + ": diverged in training episode " + std::to_string(e) +
                            ": " + err.what());
    }
    if (!result.weights.all_finite()) {
      throw DivergenceError(config.id + ": non-finite weights after episode " +
                            std::to_string(e));
    }
    log.episode = e;
    if (on_episode) on_episode(log);
    result.episodes.push_back(std::move(log));
  }
  return result;
}

TrainingResult run_training(const ExperimentConfig& config, const GridConfig& grid,
                            const EpisodeCallback& on_episode) {
  const StandardEncoder encoder(grid, config.need, config.features);
  return run_training(config, grid, encoder, on_episode);
}

std::vector<TestInit> reachable_starts(const MetabolismProfile& metabolism,
                                       const GridConfig& grid, std::size_t count,
                                       std::uint64_t suite_seed, const NeedConfig& need) {
  std::vector<TestInit> cells;
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      const double d = nearest_station(AgentState{x, y, need.homeostasis_level}, grid).distance;
      if (std::ceil(d) * metabolism.decay < need.homeostasis_level) {
        cells.push_back(TestInit{x, y, need.homeostasis_level});
      }
    }
  }
  if (cells.size() < count) {
    throw ConfigError("only " + std::to_string(cells.size()) + " cells can reach a station with " +
                      std::string(metabolism.name) + " metabolism; " + std::to_string(count) +
                      " requested");
  }
  Rng rng(derive_seed(suite_seed, "test-starts/" + std::string(metabolism.name)));
  for (std::size_t i = cells.size(); i > 1; --i) {
    std::swap(cells[i - 1], cells[rng.below(i)]);
  }
  cells.resize(count);
  return cells;
}

std::vector<TestInit> reachable_starts(const ExperimentConfig& config, const GridConfig& grid,
                                       std::size_t count) {
  return reachable_starts(metabolism_profile(config.metabolism), grid, count, config.suite_seed,
                          config.need);
}

std::vector<EpisodeLog> run_test(const ExperimentConfig& config, const GridConfig& grid,
                                 const WeightTable& weights, const std::vector<TestInit>& inits) {
  config.validate();
  grid.validate();
  const StandardEncoder encoder(grid, config.need, config.features);
  if (weights.feature_count() != encoder.size()) {
    throw ConfigError("weights have " + std::to_string(weights.feature_count()) +
                      " features, the grid needs " + std::to_string(encoder.size()));
  }
  EpisodeSettings settings;
  settings.grid = &grid;
  settings.metabolism = metabolism_profile(config.metabolism);
  settings.reward_model = config.reward_model;
  settings.need = config.need;
  settings.hp = config.hp;
  settings.max_steps = config.max_test_steps;
  settings.epsilon = 0.0;
  settings.learn = false;
  settings.trace = true;

  // The frozen policy runs on a private copy; learn=false means it is never written.
  WeightTable frozen = weights;
  Rng policy_rng(derive_seed(config.seed, "test-policy"));
  std::vector<EpisodeLog> logs;
  logs.reserve(inits.size());
  for (std::size_t i = 0; i < inits.size(); ++i) {
    const auto& init = inits[i];
    EpisodeLog log = run_episode(frozen, encoder, settings, AgentState{init.x, init.y, init.energy},
                                 policy_rng);
    log.episode = static_cast<int>(i);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace motivsim
