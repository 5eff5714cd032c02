#include "motivsim/learner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace motivsim {

void Hyperparameters::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
  if (!(epsilon_end >= 0.0 && epsilon_end <= epsilon_start && epsilon_start <= 1.0)) {
    throw ConfigError("need 0 <= epsilon_end <= epsilon_start <= 1");
  }
  if (epsilon_decay_horizon < 0) throw ConfigError("epsilon decay horizon must be >= 0");
}

bool WeightTable::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

WeightTable init_weights(Rng& rng, std::size_t feature_count) {
  WeightTable w(feature_count);
  for (Action a : kActions) {
    for (double& v : w.row(a)) v = rng.uniform(0.001, 0.009);
  }
  return w;
}

double q_value(const WeightTable& w, std::span<const double> f, Action a) {
  if (f.size() != w.feature_count()) {
    throw std::invalid_argument("q_value: feature vector has " + std::to_string(f.size()) +
                                " entries, weights expect " + std::to_string(w.feature_count()));
  }
  const auto row = w.row(a);
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += row[i] * f[i];
  return sum;
}

std::array<double, kNumActions> q_values(const WeightTable& w, std::span<const double> f) {
  std::array<double, kNumActions> q{};
  for (std::size_t i = 0; i < kNumActions; ++i) q[i] = q_value(w, f, kActions[i]);
  return q;
}

Action greedy_action(const WeightTable& w, std::span<const double> f) {
  const auto q = q_values(w, f);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumActions; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return kActions[best];
}

Action select_action(const WeightTable& w, std::span<const double> f, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return kActions[rng.below(kNumActions)];
  return greedy_action(w, f);
}

double td_update(WeightTable& w, std::span<const double> f, Action a, double reward,
                 std::span<const double> f_next, bool terminated, const Hyperparameters& hp) {
  double target = reward;
  if (!terminated) {
    const auto next = q_values(w, f_next);
    target += hp.gamma * *std::max_element(next.begin(), next.end());
  }
  if (!std::isfinite(target)) throw DivergenceError("TD target is not finite");
  const double error = target - q_value(w, f, a);
  const double step = hp.alpha * error;
  auto row = w.row(a);
  for (std::size_t i = 0; i < f.size(); ++i) {
    row[i] += step * f[i];
    if (!std::isfinite(row[i])) {
      throw DivergenceError("weight " + std::string(action_name(a)) + "[" + std::to_string(i) +
                            "] is not finite");
    }
  }
  return error;
}

double epsilon_at(int episode, const Hyperparameters& hp) {
  if (episode <= 0) return hp.epsilon_start;
  if (episode >= hp.epsilon_decay_horizon) return hp.epsilon_end;
  const double t = static_cast<double>(episode) / hp.epsilon_decay_horizon;
  return hp.epsilon_start + (hp.epsilon_end - hp.epsilon_start) * t;
}

void write_weights_csv(std::ostream& out, const WeightTable& w) {
  out << "action,feature_index,weight\n";
  char buf[64];
  for (Action a : kActions) {
    const auto row = w.row(a);
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << action_name(a) << ',' << i << ',' << buf << '\n';
    }
  }
}

WeightTable read_weights_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "action,feature_index,weight") {
    throw ConfigError("weights file: missing header 'action,feature_index,weight'");
  }
  struct Entry {
    Action action;
    std::size_t index;
    double weight;
  };
  std::vector<Entry> entries;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ConfigError("weights file: malformed row '" + line + "'");
    }
    Entry e{};
    try {
      e.action = action_from_name(line.substr(0, c1));
      e.index = std::stoul(line.substr(c1 + 1, c2 - c1 - 1));
      e.weight = std::stod(line.substr(c2 + 1));
    } catch (const std::logic_error&) {
      throw ConfigError("weights file: malformed row '" + line + "'");
    }
    max_index = std::max(max_index, e.index);
    entries.push_back(e);
  }
  const std::size_t n = max_index + 1;
  if (entries.size() != kNumActions * n) {
    throw ConfigError("weights file: expected " + std::to_string(kNumActions * n) + " rows, got " +
                      std::to_string(entries.size()));
  }
  WeightTable w(n);
  std::vector<bool> seen(kNumActions * n, false);
  for (const auto& e : entries) {
    const std::size_t slot = static_cast<std::size_t>(e.action) * n + e.index;
    if (seen[slot]) throw ConfigError("weights file: duplicate entry");
    seen[slot] = true;
    w.at(e.action, e.index) = e.weight;
  }
  if (!w.all_finite()) throw ConfigError("weights file: non-finite weight");
  return w;
}

}  // namespace motivsim
