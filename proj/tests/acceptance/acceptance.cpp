// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. `--only 1,4,6` runs a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "motivsim/cli.h"
#include "motivsim/experiments.h"
#include "motivsim/features.h"
#include "motivsim/learner.h"
#include "motivsim/motivation.h"
#include "motivsim/report.h"
#include "motivsim/run_dir.h"
#include "oracles.h"

using namespace motivsim;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  std::function<Outcome()> check;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<std::uint64_t> kSeeds = {1, 2, 3};

struct DeskRun {
  std::vector<double> occupancy;  // final training window, per station + off
  double test_mean_drive = 0.0;   // mean over tests of per-test mean drive
  double test_median_drive = 0.0;
};

DeskRun desk_run(const char* id, std::uint64_t seed, int episodes, bool with_test) {
  auto cfg = build_config(id, seed);
  set_training_episodes(cfg, episodes);
  const GridConfig grid = default_layout().grid(cfg.recharge_scheme);
  const auto trained = run_training(cfg, grid);
  DeskRun r;
  const std::size_t n = trained.episodes.size();
  r.occupancy = occupancy_by_station(trained.episodes, n - std::min<std::size_t>(500, n), n);
  if (with_test) {
    const auto inits = reachable_starts(cfg, grid, static_cast<std::size_t>(cfg.test_episodes));
    const auto logs = run_test(cfg, grid, trained.weights, inits);
    auto means = drive_summary(logs);
    double sum = 0;
    for (double m : means) sum += m;
    r.test_mean_drive = sum / static_cast<double>(means.size());
    std::sort(means.begin(), means.end());
    const std::size_t k = means.size();
    r.test_median_drive = k % 2 ? means[k / 2] : 0.5 * (means[k / 2 - 1] + means[k / 2]);
  }
  return r;
}

std::size_t top_station(const std::vector<double>& occupancy) {
  // Last slot is off-station time and does not compete.
  return static_cast<std::size_t>(
      std::max_element(occupancy.begin(), occupancy.end() - 1) - occupancy.begin());
}

std::string occupancy_text(const std::vector<double>& occ) {
  std::string s;
  const char ids[] = {'A', 'B', 'C', 'D'};
  for (std::size_t j = 0; j + 1 < occ.size(); ++j) {
    s += std::string(j ? " " : "") + ids[j] + "=" + fmt("%.2f", occ[j]);
  }
  return s;
}

// --- 1 ---------------------------------------------------------------------
Outcome reward_exactness() {
  const auto t0 = Clock::now();
  const GridConfig grid = default_layout().grid(RechargeScheme::Same);
  const double drives[] = {-30, -10, -1.5, -0.5, 0, 0.5, 5, 20};
  // Hand-written expectations: 1 inside the band, d below, -d/2 above.
  const double m1[] = {-30, -10, -1.5, 1, 1, 1, -2.5, -10};
  const double pleasure[] = {3, 2, 4, 1};
  int mismatches = 0;
  int cases = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const Drive d{drives[i]};
    ++cases;
    if (reward_m1(d) != m1[i] || reward_m2(d, std::nullopt, grid.stations) != m1[i]) ++mismatches;
    for (std::size_t j = 0; j < 4; ++j) {
      ++cases;
      if (reward_m2(d, j, grid.stations) != m1[i] + pleasure[j]) ++mismatches;
      if (reward_m1(d) != m1[i]) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 1.0,
          std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches, " +
              fmt("%.3f s", secs)};
}

// --- 2 ---------------------------------------------------------------------
Outcome tabular_equivalence() {
  const auto t0 = Clock::now();
  const double gap = oracle::tabular_equivalence_gap(2024, 500);
  const double secs = seconds_since(t0);
  return {gap <= 1e-12 && secs < 1.0, "max |dQ| = " + fmt("%.3g", gap) + ", " + fmt("%.3f s", secs)};
}

// --- 3 ---------------------------------------------------------------------
Outcome gradient_check() {
  Rng rng(99);
  Hyperparameters hp;
  hp.alpha = 1.0;
  hp.gamma = 0.0;
  const GridConfig grid = default_layout().grid(RechargeScheme::Same);
  const std::size_t n = feature_count(grid);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    WeightTable w = init_weights(rng, n);
    for (Action b : kActions) {
      for (double& v : w.row(b)) v += rng.uniform(-1.0, 1.0);
    }
    const AgentState s{rng.uniform_int(0, 19), rng.uniform_int(0, 19), rng.uniform(0.0, 50.0)};
    const auto f = encode(s, drive(s.energy), grid);
    const Action a = kActions[rng.below(kNumActions)];
    // With alpha = 1 and gamma = 0 the update is td_error * grad_w q(f, a).
    WeightTable updated = w;
    const double err = td_update(updated, f, a, q_value(w, f, a) + 1.0, f, false, hp);
    double num = 0;
    double den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double analytic = (updated.at(a, i) - w.at(a, i)) / err;
      const double h = 1e-4;
      WeightTable plus = w;
      WeightTable minus = w;
      plus.at(a, i) += h;
      minus.at(a, i) -= h;
      const double fd = (q_value(plus, f, a) - q_value(minus, f, a)) / (2 * h);
      num += (analytic - fd) * (analytic - fd);
      den += fd * fd;
    }
    worst = std::max(worst, den > 0 ? std::sqrt(num / den) : std::sqrt(num));
  }
  return {worst < 1e-6, "1000 instances, worst relative error " + fmt("%.3g", worst)};
}

// --- 4 ---------------------------------------------------------------------
Outcome feature_invariants() {
  const GridConfig grid = default_layout().grid(RechargeScheme::Same);
  const FeatureLayout L(grid);
  Rng rng(4);
  long violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const AgentState s{rng.uniform_int(0, 19), rng.uniform_int(0, 19), rng.uniform(0.0, 50.0)};
    const auto f = encode(s, drive(s.energy), grid);
    if (f.size() != 50) {
      ++violations;
      continue;
    }
    double ys = 0;
    double xs = 0;
    for (int k = 0; k < 20; ++k) {
      ys += f[L.y + k];
      xs += f[L.x + k];
    }
    if (ys != 1.0 || xs != 1.0) ++violations;
    for (std::size_t k = L.up; k < 50; ++k) {
      if (f[k] != 0.0 && f[k] != 1.0) ++violations;
    }
    double best = 0;
    oracle::scan_nearest(s.x, s.y, grid, &best);
    if (std::abs(f[L.min_dist] - best) > 1e-12) ++violations;
    for (std::size_t j = 0; j < 4; ++j) {
      const bool sees = oracle::scan_distance(s.x, s.y, grid.stations[j]) <= grid.detection_range;
      if (f[L.see + j] != (sees ? 1.0 : 0.0)) ++violations;
    }
    if (f[L.drive] != std::abs(s.energy - 30.0)) ++violations;
  }
  return {violations == 0, "100000 states, " + std::to_string(violations) + " violations"};
}

// --- 5 ---------------------------------------------------------------------
Outcome cli_determinism() {
  const auto base = std::filesystem::temp_directory_path() /
                    ("motivsim_acceptance_" + std::to_string(::getpid()));
  std::filesystem::remove_all(base);
  std::vector<std::filesystem::path> dirs;
  for (const char* tag : {"a", "b"}) {
    const auto out = base / tag;
    std::ostringstream log;
    std::ostringstream err;
    const int code = cli::run({"motivsim", "train", "--exp", "EXP05", "--seed", "42", "--out",
                               out.string(), "--quiet"},
                              log, err);
    if (code != cli::kExitOk) {
      std::filesystem::remove_all(base);
      return {false, "train exited " + std::to_string(code) + ": " + err.str()};
    }
    dirs.push_back(out / "EXP05_42");
  }
  bool same = true;
  for (auto name : {kWeightsFile, kTrainLogFile}) {
    same &= read_file(dirs[0] / name) == read_file(dirs[1] / name);
  }
  std::filesystem::remove_all(base);
  return {same, same ? "weights.csv and train_log.csv byte-identical (25000 episodes)"
                     : "outputs differ"};
}

// --- 6 ---------------------------------------------------------------------
Outcome exp03_occupancy() {
  int hits = 0;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto t0 = Clock::now();
    const auto r = desk_run("EXP03", seed, 5000, false);
    const double on_station = 1.0 - r.occupancy.back();
    hits += on_station > 0.5;
    detail += "seed " + std::to_string(seed) + ": " + fmt("%.1f%%", 100 * on_station) +
              fmt(" (%.0f s); ", seconds_since(t0));
  }
  return {hits >= 2, detail + std::to_string(hits) + "/3 above 50%"};
}

// --- 7 ---------------------------------------------------------------------
Outcome exp07_vs_exp01() {
  int c_top = 0;
  int below = 0;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto m2 = desk_run("EXP07", seed, 5000, true);
    const auto m1 = desk_run("EXP01", seed, 5000, true);
    const bool c_wins = top_station(m2.occupancy) == 2;
    c_top += c_wins;
    below += m2.test_mean_drive < m1.test_mean_drive;
    detail += "seed " + std::to_string(seed) + ": EXP07 " + occupancy_text(m2.occupancy) +
              ", drive EXP07 " + fmt("%.2f", m2.test_mean_drive) + " vs EXP01 " +
              fmt("%.2f", m1.test_mean_drive) + "; ";
  }
  return {c_top >= 2 && below >= 2, detail + "C highest " + std::to_string(c_top) +
                                        "/3, EXP07 drive below " + std::to_string(below) + "/3"};
}

// --- 8 ---------------------------------------------------------------------
Outcome exp12_station_b() {
  int hits = 0;
  std::string detail;
  for (auto seed : kSeeds) {
    const auto r = desk_run("EXP12", seed, 5000, false);
    hits += top_station(r.occupancy) == 1;
    detail += "seed " + std::to_string(seed) + ": " + occupancy_text(r.occupancy) + "; ";
  }
  return {hits >= 2, detail + "B highest " + std::to_string(hits) + "/3"};
}

// --- 9 ---------------------------------------------------------------------
Outcome exp01_test_drive() {
  const auto r = desk_run("EXP01", 1, 10000, true);
  const double m = r.test_median_drive;
  return {m >= -10.0 && m <= 5.0, "median per-test mean drive " + fmt("%.2f", m) + " (want [-10, 5])"};
}

// --- 10 --------------------------------------------------------------------
Outcome full_scale_run() {
  const auto t0 = Clock::now();
  auto cfg = build_config("EXP01", 1);
  const GridConfig grid = default_layout().grid(cfg.recharge_scheme);
  try {
    const auto r = run_training(cfg, grid);
    const double secs = seconds_since(t0);
    const bool ok = r.episodes.size() == 25000 && r.weights.all_finite() && secs < 1800.0;
    long long steps = 0;
    for (const auto& e : r.episodes) steps += e.steps;
    return {ok, "25000 episodes, " + std::to_string(steps) + " steps, " + fmt("%.0f s", secs)};
  } catch (const DivergenceError& e) {
    return {false, std::string("divergence: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"motivsim acceptance suite"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "reward functions exact on the drive x contact grid", reward_exactness},
      {2, "linear learner equals tabular oracle on one-hot 4x4", tabular_equivalence},
      {3, "TD gradient equals central finite differences", gradient_check},
      {4, "feature invariants on fuzzed states", feature_invariants},
      {5, "train EXP05 seed 42 twice is byte-identical", cli_determinism},
      {6, "EXP03 stays on stations (>50% of final 500 episodes)", exp03_occupancy},
      {7, "EXP07 prefers C and sits below EXP01's drive", exp07_vs_exp01},
      {8, "EXP12 prefers station B", exp12_station_b},
      {9, "EXP01 test drive near homeostasis after 10000 episodes", exp01_test_drive},
      {10, "full-scale EXP01 run without divergence in 30 min", full_scale_run},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ++ran;
    failed += !o.pass;
    std::printf("[%s] %2d %s -- %s\n", o.pass ? "PASS" : "FAIL", c.number, c.title.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
