#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "motivsim/env.h"
#include "motivsim/motivation.h"

namespace motivsim {

using FeatureVector = std::vector<double>;

struct FeatureOptions {
  /// Feed the signed drive instead of its magnitude (ablation only).
  bool signed_drive = false;
};

/// Offsets of each feature block for a given grid:
/// [|drive|, min_dist, up, down, left, right, see_0..see_{S-1}, y_0..y_{H-1}, x_0..x_{W-1}]
struct FeatureLayout {
  std::size_t drive = 0;
  std::size_t min_dist = 1;
  std::size_t up = 2;
  std::size_t down = 3;
  std::size_t left = 4;
  std::size_t right = 5;
  std::size_t see = 6;
  std::size_t y = 0;
  std::size_t x = 0;
  std::size_t size = 0;

  explicit FeatureLayout(const GridConfig& config);
};

/// 50 for the reference 20x20 grid with four stations.
std::size_t feature_count(const GridConfig& config);

void encode(const AgentState& state, Drive d, const GridConfig& config, std::span<double> out,
            const FeatureOptions& options = {});

FeatureVector encode(const AgentState& state, Drive d, const GridConfig& config,
                     const FeatureOptions& options = {});

/// State-to-features map used by the training loop. The standard encoder is
/// the one above; tests plug in exact one-hot encoders.
class FeatureEncoder {
 public:
  virtual ~FeatureEncoder() = default;
  virtual std::size_t size() const = 0;
  virtual void encode(const AgentState& state, std::span<double> out) const = 0;
};

class StandardEncoder final : public FeatureEncoder {
 public:
  StandardEncoder(const GridConfig& config, const NeedConfig& need,
                  const FeatureOptions& options = {})
      : config_(config), need_(need), options_(options), size_(feature_count(config)) {}

  std::size_t size() const override { return size_; }
  void encode(const AgentState& state, std::span<double> out) const override {
    motivsim::encode(state, drive(state.energy, need_), config_, out, options_);
  }

 private:
  const GridConfig& config_;
  NeedConfig need_;
  FeatureOptions options_;
  std::size_t size_;
};

}  // namespace motivsim
