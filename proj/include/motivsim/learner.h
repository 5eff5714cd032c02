#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "motivsim/env.h"
#include "motivsim/rng.h"

namespace motivsim {

/// Raised when a TD target or weight becomes non-finite.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Hyperparameters {
  double alpha = 1e-4;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  int epsilon_decay_horizon = 25000;  // episodes
  // Energy depletion still bootstraps from the next state, as the update rule
  // is written. When false, depletion is a terminal transition.
  bool bootstrap_on_depletion = true;

  void validate() const;
};

/// One weight row per action; q(s, a) = dot(row(a), features(s)).
class WeightTable {
 public:
  WeightTable() = default;
  explicit WeightTable(std::size_t feature_count)
      : feature_count_(feature_count), data_(kNumActions * feature_count, 0.0) {}

  std::size_t feature_count() const { return feature_count_; }

  std::span<double> row(Action a) {
    return {data_.data() + index(a) * feature_count_, feature_count_};
  }
  std::span<const double> row(Action a) const {
    return {data_.data() + index(a) * feature_count_, feature_count_};
  }

  double& at(Action a, std::size_t i) { return data_[index(a) * feature_count_ + i]; }
  double at(Action a, std::size_t i) const { return data_[index(a) * feature_count_ + i]; }

  std::span<const double> data() const { return data_; }

  bool all_finite() const;

  bool operator==(const WeightTable&) const = default;

 private:
  static std::size_t index(Action a) { return static_cast<std::size_t>(a); }

  std::size_t feature_count_ = 0;
  std::vector<double> data_;
};

/// Entries i.i.d. U(0.001, 0.009), drawn row by row in action order.
WeightTable init_weights(Rng& rng, std::size_t feature_count);

/// Throws std::invalid_argument on a dimension mismatch.
double q_value(const WeightTable& w, std::span<const double> f, Action a);

std::array<double, kNumActions> q_values(const WeightTable& w, std::span<const double> f);

/// argmax over actions; the earliest action in canonical order wins ties.
Action greedy_action(const WeightTable& w, std::span<const double> f);

/// epsilon-greedy. Always consumes one uniform draw for the explore/exploit
/// decision, plus one more when exploring.
Action select_action(const WeightTable& w, std::span<const double> f, double epsilon, Rng& rng);

/// Semi-gradient Q-learning step on the row of `a`:
///   target = r                                   (terminated)
///   target = r + gamma * max_a' q(f_next, a')    (otherwise)
///   w[a] += alpha * (target - q(f, a)) * f
/// Returns the TD error. Throws DivergenceError on non-finite values.
double td_update(WeightTable& w, std::span<const double> f, Action a, double reward,
                 std::span<const double> f_next, bool terminated, const Hyperparameters& hp);

/// Linear ramp from epsilon_start (episode 0) to epsilon_end (the horizon),
/// flat afterwards.
double epsilon_at(int episode, const Hyperparameters& hp);

/// CSV with header `action,feature_index,weight`, rows in action then
/// feature order. Weights are written with 17 significant digits so a
/// round trip is exact.
void write_weights_csv(std::ostream& out, const WeightTable& w);
WeightTable read_weights_csv(std::istream& in);

}  // namespace motivsim
