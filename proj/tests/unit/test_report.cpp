#include <gtest/gtest.h>

#include <cmath>
#include <regex>

#include "motivsim/report.h"

using namespace motivsim;

namespace {

EpisodeLog episode(double reward, int steps) {
  EpisodeLog log;
  log.cumulative_reward = reward;
  log.steps = steps;
  return log;
}

EpisodeLog traced(const std::vector<double>& drives, const std::vector<int>& contacts = {}) {
  EpisodeLog log;
  log.steps = static_cast<int>(drives.size());
  log.contact_steps.assign(5, 0);
  for (std::size_t i = 0; i < drives.size(); ++i) {
    const int c = contacts.empty() ? -1 : contacts[i];
    log.trace.push_back({drives[i], 0, 0, c});
    ++log.contact_steps[c < 0 ? 4 : static_cast<std::size_t>(c)];
  }
  return log;
}

std::vector<EpisodeLog> random_logs(Rng& rng, std::size_t n) {
  std::vector<EpisodeLog> logs;
  for (std::size_t i = 0; i < n; ++i) {
    logs.push_back(episode(rng.uniform(-5000.0, 50.0), rng.uniform_int(1, 5000)));
  }
  return logs;
}

int count_matches(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                        std::sregex_iterator()));
}

const GridConfig kGrid = default_layout().grid(RechargeScheme::Same);

}  // namespace

TEST(WindowStats, ConstantSeries) {
  const std::vector<EpisodeLog> logs(100, episode(5.0, 12));
  const auto stats = window_stats(logs);
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_EQ(stats[0].mean_reward, 5.0);
  EXPECT_EQ(stats[0].std_reward, 0.0);
  EXPECT_EQ(stats[0].mean_steps, 12.0);
  EXPECT_EQ(stats[0].std_steps, 0.0);
  EXPECT_EQ(stats[0].episodes, 100u);
}

TEST(WindowStats, TwoPointDistribution) {
  std::vector<EpisodeLog> logs;
  for (int i = 0; i < 50; ++i) {
    logs.push_back(episode(0.0, 1));
    logs.push_back(episode(10.0, 1));
  }
  const auto stats = window_stats(logs);
  ASSERT_EQ(stats.size(), 1u);
  EXPECT_DOUBLE_EQ(stats[0].mean_reward, 5.0);
  EXPECT_DOUBLE_EQ(stats[0].std_reward, 5.0);
}

TEST(WindowStats, TrailingPartialWindow) {
  const std::vector<EpisodeLog> logs(250, episode(1.0, 1));
  const auto stats = window_stats(logs);
  ASSERT_EQ(stats.size(), 3u);
  EXPECT_EQ(stats[2].episodes, 50u);
  EXPECT_EQ(stats[2].window, 2u);
}

TEST(WindowStats, Errors) {
  EXPECT_THROW(window_stats(std::vector<EpisodeLog>{}), std::invalid_argument);
  EXPECT_THROW(window_stats(std::vector<EpisodeLog>(3), 0), std::invalid_argument);
}

TEST(WindowStats, MatchesTwoPassOracle) {
  Rng rng(55);
  const auto logs = random_logs(rng, 737);
  const auto stats = window_stats(logs, 100);
  ASSERT_EQ(stats.size(), 8u);
  for (std::size_t w = 0; w < stats.size(); ++w) {
    const std::size_t first = w * 100;
    const std::size_t last = std::min(first + 100, logs.size());
    const double n = static_cast<double>(last - first);
    double mr = 0;
    double ms = 0;
    for (std::size_t i = first; i < last; ++i) {
      mr += logs[i].cumulative_reward;
      ms += logs[i].steps;
    }
    mr /= n;
    ms /= n;
    double vr = 0;
    double vs = 0;
    for (std::size_t i = first; i < last; ++i) {
      vr += (logs[i].cumulative_reward - mr) * (logs[i].cumulative_reward - mr);
      vs += (logs[i].steps - ms) * (logs[i].steps - ms);
    }
    EXPECT_NEAR(stats[w].mean_reward, mr, 1e-9);
    EXPECT_NEAR(stats[w].std_reward, std::sqrt(vr / n), 1e-9);
    EXPECT_NEAR(stats[w].mean_steps, ms, 1e-9);
    EXPECT_NEAR(stats[w].std_steps, std::sqrt(vs / n), 1e-9);
  }
}

TEST(WindowStats, ConcatenationOfWholeWindows) {
  Rng rng(56);
  const auto a = random_logs(rng, 300);
  const auto b = random_logs(rng, 200);
  std::vector<EpisodeLog> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const auto sa = window_stats(a);
  const auto sb = window_stats(b);
  const auto sab = window_stats(ab);
  ASSERT_EQ(sab.size(), sa.size() + sb.size());
  for (std::size_t i = 0; i < sab.size(); ++i) {
    const auto& part = i < sa.size() ? sa[i] : sb[i - sa.size()];
    EXPECT_EQ(sab[i].mean_reward, part.mean_reward);
    EXPECT_EQ(sab[i].std_reward, part.std_reward);
    EXPECT_EQ(sab[i].mean_steps, part.mean_steps);
    EXPECT_EQ(sab[i].std_steps, part.std_steps);
  }
}

TEST(Heatmap, AllZeroCounts) {
  const auto svg = render_heatmap(make_heatmap(VisitGrid(20, 20), kGrid));
  EXPECT_EQ(count_matches(svg, "fill=\"#08306b\""), 400);
  EXPECT_EQ(count_matches(svg, "fill-opacity=\"0\""), 400);
  for (char id : {'A', 'B', 'C', 'D'}) {
    EXPECT_NE(svg.find("stroke=\"" + station_color(id) + "\""), std::string::npos) << id;
  }
}

TEST(Heatmap, SingleCellAtFullIntensity) {
  VisitGrid v(20, 20);
  v.at(7, 4) = 13;
  const auto svg = render_heatmap(make_heatmap(v, kGrid));
  EXPECT_EQ(count_matches(svg, "fill-opacity=\"1\""), 1);
  EXPECT_EQ(count_matches(svg, "fill-opacity=\"0\""), 399);
  EXPECT_NE(svg.find("<title>(7,4) 13</title>"), std::string::npos);
}

TEST(Heatmap, LinearScaling) {
  VisitGrid v(20, 20);
  v.at(0, 0) = 4;
  v.at(1, 0) = 1;
  const auto svg = render_heatmap(make_heatmap(v, kGrid));
  EXPECT_EQ(count_matches(svg, "fill-opacity=\"0.25\""), 1);
}

TEST(Heatmap, DeterministicBytes) {
  Rng rng(1);
  VisitGrid v(20, 20);
  for (auto& c : v.counts) c = static_cast<std::int64_t>(rng.below(1000));
  const auto h = make_heatmap(v, kGrid);
  EXPECT_EQ(render_heatmap(h), render_heatmap(make_heatmap(v, kGrid)));
  EXPECT_EQ(h.counts, v.counts);
}

TEST(DriveSummary, Examples) {
  const std::vector<EpisodeLog> logs = {traced({0, 0, 0}), traced({-30, 20}), traced({})};
  const auto m = drive_summary(logs);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], 0.0);
  EXPECT_EQ(m[1], -5.0);
  EXPECT_EQ(m[2], 0.0);
  EXPECT_THROW(drive_summary(std::vector<EpisodeLog>{}), std::invalid_argument);
}

TEST(DriveSummary, MatchesNaiveMean) {
  Rng rng(8);
  std::vector<EpisodeLog> logs;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> d(rng.uniform_int(1, 300));
    for (auto& x : d) x = rng.uniform(-30.0, 20.0);
    logs.push_back(traced(d));
  }
  const auto m = drive_summary(logs);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    double s = 0;
    for (const auto& r : logs[i].trace) s += r.drive;
    EXPECT_EQ(m[i], s / static_cast<double>(logs[i].trace.size()));
  }
}

TEST(DriveSummary, CsvAndChart) {
  const std::vector<double> means = {-5.0, 0.5};
  EXPECT_EQ(drive_summary_csv(means), "test_index,mean_drive\n0,-5\n1,0.5\n");
  const auto svg = render_drive_chart(means);
  EXPECT_NE(svg.find("id=\"homeostasis\""), std::string::npos);
  EXPECT_EQ(svg, render_drive_chart(means));
}

TEST(RewardCurve, Deterministic) {
  const std::vector<EpisodeLog> logs(300, episode(-3.0, 40));
  const auto stats = window_stats(logs);
  const auto svg = render_reward_curve(stats);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(svg, render_reward_curve(stats));
}

TEST(Occupancy, Examples) {
  const std::vector<EpisodeLog> off = {traced({0, 0, 0})};
  const auto f = occupancy_by_station(off, 0, 1);
  EXPECT_EQ(f, (std::vector<double>{0, 0, 0, 0, 1}));

  const std::vector<EpisodeLog> in_c = {traced({0, 0}, {2, 2}), traced({1}, {2})};
  EXPECT_EQ(occupancy_by_station(in_c, 0, 2), (std::vector<double>{0, 0, 1, 0, 0}));
}

TEST(Occupancy, MatchesCountingOracleAndSumsToOne) {
  Rng rng(99);
  std::vector<EpisodeLog> logs;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> d(rng.uniform_int(1, 200), 0.0);
    std::vector<int> c(d.size());
    for (auto& x : c) x = static_cast<int>(rng.below(5)) - 1;
    logs.push_back(traced(d, c));
  }
  const auto f = occupancy_by_station(logs, 10, 35);
  std::array<double, 5> counts{};
  double total = 0;
  for (std::size_t i = 10; i < 35; ++i) {
    for (const auto& r : logs[i].trace) {
      counts[r.station_contact < 0 ? 4 : static_cast<std::size_t>(r.station_contact)] += 1;
      total += 1;
    }
  }
  double sum = 0;
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_DOUBLE_EQ(f[j], counts[j] / total);
    sum += f[j];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Occupancy, Errors) {
  const std::vector<EpisodeLog> logs = {traced({0})};
  EXPECT_THROW(occupancy_by_station(logs, 0, 0), std::invalid_argument);
  EXPECT_THROW(occupancy_by_station(logs, 0, 2), std::invalid_argument);
  const std::vector<EpisodeLog> empty = {traced({})};
  EXPECT_THROW(occupancy_by_station(empty, 0, 1), std::invalid_argument);
}

TEST(FormatNumber, Basics) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(1.0 / 3.0, 4), "0.3333");
}
