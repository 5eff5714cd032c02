#include "motivsim/features.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace motivsim {

FeatureLayout::FeatureLayout(const GridConfig& config) {
  y = see + config.stations.size();
  x = y + static_cast<std::size_t>(config.height);
  size = x + static_cast<std::size_t>(config.width);
}

std::size_t feature_count(const GridConfig& config) { return FeatureLayout(config).size; }

void encode(const AgentState& state, Drive d, const GridConfig& config, std::span<double> out,
            const FeatureOptions& options) {
  const FeatureLayout layout(config);
  if (out.size() != layout.size) throw std::invalid_argument("encode: output size mismatch");
  std::fill(out.begin(), out.end(), 0.0);

  out[layout.drive] = options.signed_drive ? d.value : std::abs(d.value);

  const NearestStation nearest = nearest_station(state, config);
  out[layout.min_dist] = nearest.distance;
  // Strict comparisons: an aligned axis leaves both of its bits at 0.
  out[layout.up] = nearest.cell_y < state.y ? 1.0 : 0.0;
  out[layout.down] = nearest.cell_y > state.y ? 1.0 : 0.0;
  out[layout.left] = nearest.cell_x < state.x ? 1.0 : 0.0;
  out[layout.right] = nearest.cell_x > state.x ? 1.0 : 0.0;

  for (std::size_t i = 0; i < config.stations.size(); ++i) {
    const double dist = station_distance(state.x, state.y, config.stations[i]);
    out[layout.see + i] = dist <= config.detection_range ? 1.0 : 0.0;
  }

  out[layout.y + static_cast<std::size_t>(state.y)] = 1.0;
  out[layout.x + static_cast<std::size_t>(state.x)] = 1.0;
}

FeatureVector encode(const AgentState& state, Drive d, const GridConfig& config,
                     const FeatureOptions& options) {
  FeatureVector f(feature_count(config));
  encode(state, d, config, f, options);
  return f;
}

}  // namespace motivsim
