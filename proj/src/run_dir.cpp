#include "motivsim/run_dir.h"

#include <fstream>
#include <istream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "motivsim/report.h"

namespace motivsim {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    T v{};
    if constexpr (std::is_same_v<T, double>) {
      v = std::stod(s, &used);
    } else {
      v = static_cast<T>(std::stoll(s, &used));
    }
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(std::string("bad ") + what + " value '" + s + "'");
  }
}

std::string num(double v) { return format_number(v, 17); }

bool has_file(const fs::path& dir, std::string_view name) { return fs::exists(dir / name); }

void refuse_overwrite(const fs::path& dir, std::initializer_list<std::string_view> names,
                      bool force) {
  if (force) return;
  for (auto n : names) {
    if (has_file(dir, n)) {
      throw RunDirError((dir / n).string() + " already exists (use --force to overwrite)");
    }
  }
}

// Temporary sibling directory; removed on scope exit unless released.
class StagingDir {
 public:
  explicit StagingDir(const fs::path& final_dir)
      : path_(final_dir.parent_path() / ("." + final_dir.filename().string() + ".staging")) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~StagingDir() {
    if (!released_) {
      std::error_code ec;
      fs::remove_all(path_, ec);
    }
  }
  StagingDir(const StagingDir&) = delete;
  StagingDir& operator=(const StagingDir&) = delete;

  const fs::path& path() const { return path_; }

  void commit(const fs::path& final_dir, bool replace) {
    if (fs::exists(final_dir)) {
      if (!replace) throw RunDirError(final_dir.string() + " already exists (use --force)");
      fs::remove_all(final_dir);
    }
    fs::rename(path_, final_dir);
    released_ = true;
  }

 private:
  fs::path path_;
  bool released_ = false;
};

}  // namespace

std::string manifest_json(const RunManifest& m) {
  const auto& c = m.config;
  nlohmann::ordered_json doc;
  doc["experiment_id"] = c.id;
  doc["seed"] = c.seed;
  doc["suite_seed"] = c.suite_seed;
  doc["reward_model"] = std::string(reward_model_name(c.reward_model));
  doc["metabolism"] = std::string(metabolism_profile(c.metabolism).name);
  doc["recharge_scheme"] = std::string(scheme_name(c.recharge_scheme));
  auto& o = doc["overrides"];
  o["training_episodes"] = c.training_episodes;
  o["max_train_steps"] = c.max_train_steps;
  o["test_episodes"] = c.test_episodes;
  o["max_test_steps"] = c.max_test_steps;
  o["alpha"] = c.hp.alpha;
  o["gamma"] = c.hp.gamma;
  o["epsilon_start"] = c.hp.epsilon_start;
  o["epsilon_end"] = c.hp.epsilon_end;
  o["epsilon_decay_horizon"] = c.hp.epsilon_decay_horizon;
  o["bootstrap_on_depletion"] = c.hp.bootstrap_on_depletion;
  o["homeostasis_level"] = c.need.homeostasis_level;
  o["overshoot_gain"] = c.need.overshoot_gain;
  o["signed_drive"] = c.features.signed_drive;
  doc["layout"] = nlohmann::ordered_json::parse(layout_to_json(m.layout));
  return doc.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    const auto id = doc.at("experiment_id").get<std::string>();
    const auto seed = doc.at("seed").get<std::uint64_t>();
    m.config = build_config(id, seed);
    m.config.suite_seed = doc.value("suite_seed", seed);
    if (doc.contains("overrides")) {
      const auto& o = doc.at("overrides");
      auto& c = m.config;
      if (o.contains("training_episodes")) {
        set_training_episodes(c, o.at("training_episodes").get<int>());
      }
      c.max_train_steps = o.value("max_train_steps", c.max_train_steps);
      c.test_episodes = o.value("test_episodes", c.test_episodes);
      c.max_test_steps = o.value("max_test_steps", c.max_test_steps);
      c.hp.alpha = o.value("alpha", c.hp.alpha);
      c.hp.gamma = o.value("gamma", c.hp.gamma);
      c.hp.epsilon_start = o.value("epsilon_start", c.hp.epsilon_start);
      c.hp.epsilon_end = o.value("epsilon_end", c.hp.epsilon_end);
      c.hp.epsilon_decay_horizon = o.value("epsilon_decay_horizon", c.hp.epsilon_decay_horizon);
      c.hp.bootstrap_on_depletion =
          o.value("bootstrap_on_depletion", c.hp.bootstrap_on_depletion);
      c.need.homeostasis_level = o.value("homeostasis_level", c.need.homeostasis_level);
      c.need.overshoot_gain = o.value("overshoot_gain", c.need.overshoot_gain);
      c.features.signed_drive = o.value("signed_drive", c.features.signed_drive);
    }
    m.layout = doc.contains("layout") ? parse_layout(doc.at("layout").dump()) : default_layout();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  m.config.validate();
  m.config.need.validate(m.layout.battery_max);
  return m;
}

RunManifest load_manifest(const fs::path& path) { return parse_manifest(read_file(path)); }

std::string train_log_csv(const std::vector<EpisodeLog>& logs, const GridConfig& grid) {
  std::ostringstream out;
  out << "episode,reward,steps";
  for (const auto& s : grid.stations) out << ",contact_" << s.id;
  out << ",contact_none\n";
  for (const auto& l : logs) {
    out << l.episode << ',' << num(l.cumulative_reward) << ',' << l.steps;
    for (auto c : l.contact_steps) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

std::vector<EpisodeLog> parse_train_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("train log is empty");
  const auto header = split_csv(line);
  if (header.size() < 4 || header[0] != "episode" || header[1] != "reward" ||
      header[2] != "steps" || header.back() != "contact_none") {
    throw ConfigError("train log: unexpected header '" + line + "'");
  }
  const std::size_t slots = header.size() - 3;
  std::vector<EpisodeLog> logs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw ConfigError("train log: bad row '" + line + "'");
    EpisodeLog l;
    l.episode = parse_field<int>(f[0], "episode");
    l.cumulative_reward = parse_field<double>(f[1], "reward");
    l.steps = parse_field<int>(f[2], "steps");
    l.contact_steps.resize(slots);
    for (std::size_t i = 0; i < slots; ++i) {
      l.contact_steps[i] = parse_field<std::int64_t>(f[3 + i], "contact");
    }
    logs.push_back(std::move(l));
  }
  return logs;
}

std::string visits_csv(const VisitGrid& visits) {
  std::ostringstream out;
  out << "x,y,count\n";
  for (int y = 0; y < visits.height; ++y) {
    for (int x = 0; x < visits.width; ++x) out << x << ',' << y << ',' << visits.at(x, y) << '\n';
  }
  return out.str();
}

VisitGrid parse_visits(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,count") {
    throw ConfigError("visits file: missing header 'x,y,count'");
  }
  struct Row {
    int x, y;
    std::int64_t count;
  };
  std::vector<Row> rows;
  int w = 0;
  int h = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw ConfigError("visits file: bad row '" + line + "'");
    Row r{parse_field<int>(f[0], "x"), parse_field<int>(f[1], "y"),
          parse_field<std::int64_t>(f[2], "count")};
    if (r.x < 0 || r.y < 0) throw ConfigError("visits file: negative coordinate");
    w = std::max(w, r.x + 1);
    h = std::max(h, r.y + 1);
    rows.push_back(r);
  }
  VisitGrid g(w, h);
  for (const auto& r : rows) g.at(r.x, r.y) = r.count;
  return g;
}

std::string test_log_csv(const std::vector<EpisodeLog>& logs, const GridConfig& grid) {
  std::ostringstream out;
  out << "test_index,step,drive,x,y,station_contact\n";
  for (const auto& l : logs) {
    for (std::size_t t = 0; t < l.trace.size(); ++t) {
      const auto& s = l.trace[t];
      out << l.episode << ',' << t << ',' << num(s.drive) << ',' << s.x << ',' << s.y << ',';
      if (s.station_contact >= 0) out << grid.stations[static_cast<std::size_t>(s.station_contact)].id;
      out << '\n';
    }
  }
  return out.str();
}

std::vector<EpisodeLog> parse_test_log(std::istream& in, const GridConfig& grid) {
  std::string line;
  if (!std::getline(in, line) || line != "test_index,step,drive,x,y,station_contact") {
    throw ConfigError("test log: unexpected header");
  }
  const std::size_t n = grid.stations.size();
  std::vector<EpisodeLog> logs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ConfigError("test log: bad row '" + line + "'");
    const int idx = parse_field<int>(f[0], "test_index");
    if (logs.empty() || logs.back().episode != idx) {
      EpisodeLog l;
      l.episode = idx;
      l.contact_steps.assign(n + 1, 0);
      logs.push_back(std::move(l));
    }
    auto& l = logs.back();
    StepRecord s;
    s.drive = parse_field<double>(f[2], "drive");
    s.x = parse_field<int>(f[3], "x");
    s.y = parse_field<int>(f[4], "y");
    if (!f[5].empty()) {
      if (f[5].size() != 1) throw ConfigError("test log: bad station '" + f[5] + "'");
      s.station_contact = static_cast<int>(grid.station_index(f[5][0]));
    }
    ++l.contact_steps[s.station_contact >= 0 ? static_cast<std::size_t>(s.station_contact) : n];
    l.trace.push_back(s);
    ++l.steps;
  }
  return logs;
}

std::string weights_csv(const WeightTable& w) {
  std::ostringstream out;
  write_weights_csv(out, w);
  return out.str();
}

std::string run_dir_name(const ExperimentConfig& config) {
  return config.id + "_" + std::to_string(config.seed);
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path train_to_directory(const RunManifest& manifest, const fs::path& out_root, bool force,
                            const EpisodeCallback& on_episode) {
  const auto& config = manifest.config;
  const GridConfig grid = manifest.layout.grid(config.recharge_scheme);
  config.validate();
  config.need.validate(grid.battery_max);

  fs::create_directories(out_root);
  const fs::path final_dir = out_root / run_dir_name(config);
  if (fs::exists(final_dir) && !force) {
    throw RunDirError(final_dir.string() + " already exists (use --force to replace it)");
  }

  const TrainingResult result = run_training(config, grid, on_episode);

  StagingDir staging(final_dir);
  const fs::path& dir = staging.path();
  write_file_atomic(dir / kManifestFile, manifest_json(manifest));
  write_file_atomic(dir / kTrainLogFile, train_log_csv(result.episodes, grid));
  write_file_atomic(dir / kVisitsFile, visits_csv(result.visits));
  write_file_atomic(dir / kWeightsFile, weights_csv(result.weights));
  staging.commit(final_dir, force);
  return final_dir;
}

void test_to_directory(const RunManifest& manifest, const fs::path& run_dir,
                       const fs::path& weights_path, bool force) {
  const auto& config = manifest.config;
  const GridConfig grid = manifest.layout.grid(config.recharge_scheme);

  std::ifstream win(weights_path);
  if (!win) throw ConfigError("cannot open weights file " + weights_path.string());
  const WeightTable weights = read_weights_csv(win);

  const auto inits = reachable_starts(config, grid, static_cast<std::size_t>(config.test_episodes));
  const auto logs = run_test(config, grid, weights, inits);
  const std::string csv = test_log_csv(logs, grid);

  if (fs::exists(run_dir)) {
    refuse_overwrite(run_dir, {kTestLogFile}, force);
    write_file_atomic(run_dir / kTestLogFile, csv);
    if (!has_file(run_dir, kManifestFile)) {
      write_file_atomic(run_dir / kManifestFile, manifest_json(manifest));
    }
    return;
  }
  if (!run_dir.parent_path().empty()) fs::create_directories(run_dir.parent_path());
  StagingDir staging(run_dir);
  write_file_atomic(staging.path() / kManifestFile, manifest_json(manifest));
  write_file_atomic(staging.path() / kTestLogFile, csv);
  staging.commit(run_dir, false);
}

void report_directory(const fs::path& run_dir, bool force, const ReportOptions& options) {
  if (!fs::is_directory(run_dir)) throw ConfigError(run_dir.string() + " is not a run directory");
  const RunManifest manifest = load_manifest(run_dir / kManifestFile);
  const GridConfig grid = manifest.layout.grid(manifest.config.recharge_scheme);
  const bool have_train = has_file(run_dir, kTrainLogFile);
  const bool have_test = has_file(run_dir, kTestLogFile);
  if (!have_train && !have_test) {
    throw ConfigError(run_dir.string() + " has neither a train log nor a test log");
  }

  // Render everything first so a bad input leaves the directory untouched.
  std::vector<std::pair<std::string_view, std::string>> outputs;
  std::ostringstream occupancy;
  occupancy << "phase,first_episode,last_episode,station,fraction\n";
  auto occupancy_rows = [&](std::string_view phase, const std::vector<EpisodeLog>& logs,
                            std::size_t first) {
    const auto frac = occupancy_by_station(logs, first, logs.size());
    for (std::size_t i = 0; i < frac.size(); ++i) {
      occupancy << phase << ',' << logs[first].episode << ',' << logs.back().episode << ',';
      if (i < grid.stations.size()) {
        occupancy << grid.stations[i].id;
      } else {
        occupancy << "none";
      }
      occupancy << ',' << format_number(frac[i], 17) << '\n';
    }
  };

  if (have_train) {
    std::istringstream tin(read_file(run_dir / kTrainLogFile));
    const auto train = parse_train_log(tin);
    if (train.empty()) throw ConfigError("train log has no episodes");
    const auto stats = window_stats(train, options.window);
    outputs.emplace_back(kRewardCurveFile, render_reward_curve(stats));
    const std::size_t tail = std::min(options.final_episodes, train.size());
    occupancy_rows("train", train, train.size() - tail);
  }
  if (has_file(run_dir, kVisitsFile)) {
    std::istringstream vin(read_file(run_dir / kVisitsFile));
    outputs.emplace_back(kHeatmapFile, render_heatmap(make_heatmap(parse_visits(vin), grid)));
  }
  if (have_test) {
    std::istringstream tin(read_file(run_dir / kTestLogFile));
    const auto tests = parse_test_log(tin, grid);
    if (!tests.empty()) {
      const auto means = drive_summary(tests);
      outputs.emplace_back(kDriveChartFile, render_drive_chart(means));
      outputs.emplace_back(kDriveCsvFile, drive_summary_csv(means));
      occupancy_rows("test", tests, 0);
    }
  }
  outputs.emplace_back(kOccupancyFile, occupancy.str());

  if (!force) {
    for (const auto& [name, content] : outputs) refuse_overwrite(run_dir, {name}, false);
  }
  for (const auto& [name, content] : outputs) write_file_atomic(run_dir / name, content);
}

}  // namespace motivsim
