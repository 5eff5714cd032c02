#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "motivsim/env.h"
#include "motivsim/experiments.h"
#include "motivsim/learner.h"

namespace motivsim {

// File names inside a run directory.
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kTrainLogFile = "train_log.csv";
inline constexpr std::string_view kVisitsFile = "visits.csv";
inline constexpr std::string_view kWeightsFile = "weights.csv";
inline constexpr std::string_view kTestLogFile = "test_log.csv";
inline constexpr std::string_view kRewardCurveFile = "reward_curve.svg";
inline constexpr std::string_view kHeatmapFile = "heatmap.svg";
inline constexpr std::string_view kDriveChartFile = "drive_tests.svg";
inline constexpr std::string_view kDriveCsvFile = "drive_tests.csv";
inline constexpr std::string_view kOccupancyFile = "occupancy.csv";

/// Existing file that would be overwritten without --force.
class RunDirError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment settings plus the layout they ran on.
struct RunManifest {
  ExperimentConfig config;
  Layout layout;
};

/// {experiment_id, seed, suite_seed, reward_model, metabolism,
///  recharge_scheme, overrides: {...}, layout: {...}}. Key order is fixed.
std::string manifest_json(const RunManifest& manifest);

/// Needs experiment_id and seed; every override and the layout are optional.
RunManifest parse_manifest(std::string_view json_text);
RunManifest load_manifest(const std::filesystem::path& path);

/// episode,reward,steps,contact_<id>...,contact_none
std::string train_log_csv(const std::vector<EpisodeLog>& logs, const GridConfig& grid);
std::vector<EpisodeLog> parse_train_log(std::istream& in);

/// x,y,count for every cell, row-major.
std::string visits_csv(const VisitGrid& visits);
VisitGrid parse_visits(std::istream& in);

/// test_index,step,drive,x,y,station_contact (station id, empty off-station)
std::string test_log_csv(const std::vector<EpisodeLog>& logs, const GridConfig& grid);
std::vector<EpisodeLog> parse_test_log(std::istream& in, const GridConfig& grid);

std::string weights_csv(const WeightTable& w);

/// `<exp_id>_<seed>`
std::string run_dir_name(const ExperimentConfig& config);

/// Writes via a temporary sibling and rename, so readers never see a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Trains and writes manifest, train log, visits and weights into
/// `<out_root>/<exp>_<seed>/`. The directory is assembled under a temporary
/// name and renamed into place at the end. An existing run directory is only
/// replaced when `force` is set. Returns the run directory.
std::filesystem::path train_to_directory(const RunManifest& manifest,
                                         const std::filesystem::path& out_root, bool force,
                                         const EpisodeCallback& on_episode = {});

/// Greedy test of `weights_path` written as test_log.csv into `run_dir`
/// (created, with its manifest, if missing).
void test_to_directory(const RunManifest& manifest, const std::filesystem::path& run_dir,
                       const std::filesystem::path& weights_path, bool force);

struct ReportOptions {
  std::size_t window = 100;          // episodes per reward-curve point
  std::size_t final_episodes = 500;  // training tail used for occupancy.csv
};

/// Reads the CSVs of a run directory and writes reward_curve.svg,
/// heatmap.svg, occupancy.csv and, when a test log exists, drive_tests.svg
/// and drive_tests.csv.
void report_directory(const std::filesystem::path& run_dir, bool force,
                      const ReportOptions& options = {});

}  // namespace motivsim
