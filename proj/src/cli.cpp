#include "motivsim/cli.h"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "motivsim/experiments.h"
#include "motivsim/run_dir.h"

namespace motivsim::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kProgressEvery = 1000;

std::optional<std::uint64_t> seed_from_env() {
  const char* v = std::getenv("MOTIVSIM_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  if (*end != '\0') throw UsageError(std::string("MOTIVSIM_SEED is not an integer: ") + v);
  return seed;
}

// Manifest for one experiment: explicit manifest file first, then CLI overrides.
RunManifest manifest_for(const Command& cmd, const std::string& exp) {
  RunManifest m;
  if (cmd.manifest_path) {
    m = load_manifest(*cmd.manifest_path);
  } else {
    m.config = build_config(exp, cmd.seed);
    m.layout = cmd.layout;
  }
  if (cmd.layout_path) m.layout = cmd.layout;
  if (cmd.episodes) set_training_episodes(m.config, *cmd.episodes);
  if (cmd.test_episodes) m.config.test_episodes = *cmd.test_episodes;
  if (cmd.signed_drive) m.config.features.signed_drive = true;
  if (cmd.terminal_depletion) m.config.hp.bootstrap_on_depletion = false;
  m.config.validate();
  m.config.need.validate(m.layout.battery_max);
  return m;
}

class Logger {
 public:
  Logger(std::ostream& out, bool quiet) : out_(out), quiet_(quiet) {}
  void line(const std::string& s) {
    if (quiet_) return;
    std::lock_guard lock(mu_);
    out_ << s << '\n' << std::flush;
  }

 private:
  std::ostream& out_;
  bool quiet_;
  std::mutex mu_;
};

EpisodeCallback progress(Logger& logger, const ExperimentConfig& config) {
  return [&logger, id = config.id, total = config.training_episodes](const EpisodeLog& e) {
    if ((e.episode + 1) % kProgressEvery == 0 || e.episode + 1 == total) {
      std::ostringstream s;
      s << id << ": episode " << e.episode + 1 << "/" << total << " steps " << e.steps;
      logger.line(s.str());
    }
  };
}

void run_train(const Command& cmd, const std::string& exp, Logger& logger) {
  const RunManifest m = manifest_for(cmd, exp);
  const fs::path dir = train_to_directory(m, cmd.out, cmd.force, progress(logger, m.config));
  logger.line("trained " + m.config.id + " -> " + dir.string());
}

fs::path run_dir_for(const Command& cmd, const RunManifest& m) {
  return cmd.run_dir ? *cmd.run_dir : cmd.out / run_dir_name(m.config);
}

void run_test_cmd(const Command& cmd, const std::string& exp, Logger& logger) {
  RunManifest m = manifest_for(cmd, exp);
  const fs::path dir = run_dir_for(cmd, m);
  // A run directory made by `train` carries the settings the weights were trained with.
  if (!cmd.manifest_path && fs::exists(dir / kManifestFile)) {
    Command inner = cmd;
    inner.manifest_path = dir / kManifestFile;
    m = manifest_for(inner, exp);
  }
  test_to_directory(m, dir, *cmd.weights_path, cmd.force);
  logger.line("tested " + m.config.id + " -> " + (dir / kTestLogFile).string());
}

void run_report(const Command& cmd, const fs::path& dir, Logger& logger) {
  report_directory(dir, cmd.force, ReportOptions{cmd.window, cmd.final_episodes});
  logger.line("report written to " + dir.string());
}

void run_suite_job(const Command& cmd, const std::string& exp, Logger& logger) {
  const RunManifest m = manifest_for(cmd, exp);
  const fs::path dir = train_to_directory(m, cmd.out, cmd.force, progress(logger, m.config));
  test_to_directory(m, dir, dir / kWeightsFile, cmd.force);
  report_directory(dir, cmd.force, ReportOptions{cmd.window, cmd.final_episodes});
  logger.line("finished " + m.config.id + " -> " + dir.string());
}

}  // namespace

Command parse_args(const std::vector<std::string>& args, std::optional<std::uint64_t> env_seed) {
  CLI::App app{"Homeostatic drive-reduction agents in a 20x20 recharge-station grid world",
               "motivsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "motivsim 0.1.0");

  Command cmd;
  std::string exp;
  std::optional<std::uint64_t> seed;
  std::string layout_path;
  std::string out;
  std::string weights;
  std::string run_dir;
  std::string manifest;
  int episodes = 0;
  int test_episodes = 0;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed (default: $MOTIVSIM_SEED)");
    sub->add_option("--out", out, "Root directory for run directories")->capture_default_str();
    sub->add_option("--layout", layout_path, "Grid/station layout JSON");
    sub->add_flag("--force", cmd.force, "Replace existing outputs");
    sub->add_flag("--quiet", cmd.quiet, "No progress lines");
  };
  auto add_learning = [&](CLI::App* sub) {
    sub->add_option("--episodes", episodes, "Training episodes (default 25000)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--test-episodes", test_episodes, "Test episodes (default 50)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--signed-drive", cmd.signed_drive, "Feed the signed drive as a feature");
    sub->add_flag("--terminal-depletion", cmd.terminal_depletion,
                  "Do not bootstrap from the depletion step");
  };
  auto add_report = [&](CLI::App* sub) {
    sub->add_option("--window", cmd.window, "Episodes per reward-curve point")
        ->check(CLI::PositiveNumber);
    sub->add_option("--final", cmd.final_episodes, "Training tail used for occupancy.csv")
        ->check(CLI::PositiveNumber);
  };

  auto* train = app.add_subcommand("train", "Train one experiment");
  train->add_option("--exp", exp, "Experiment id (EXP01..EXP12)");
  train->add_option("--manifest", manifest, "Run manifest JSON");
  add_common(train);
  add_learning(train);

  auto* test = app.add_subcommand("test", "Greedy test of trained weights");
  test->add_option("--exp", exp, "Experiment id (EXP01..EXP12)");
  test->add_option("--weights", weights, "weights.csv from a training run");
  test->add_option("--run", run_dir, "Run directory to write test_log.csv into");
  test->add_option("--manifest", manifest, "Run manifest JSON");
  add_common(test);
  add_learning(test);

  auto* report = app.add_subcommand("report", "Render charts for a run directory");
  report->add_option("--run", run_dir, "Run directory");
  report->add_option("--exp", exp, "Experiment id, with --seed and --out");
  add_common(report);
  add_report(report);

  auto* suite = app.add_subcommand("suite", "Train, test and report all 12 experiments");
  add_common(suite);
  add_learning(suite);
  add_report(suite);
  suite->add_option("--jobs", jobs, "Experiments run concurrently")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate-config", "Check a layout and/or manifest");
  validate->add_option("--layout", layout_path, "Grid/station layout JSON");
  validate->add_option("--manifest", manifest, "Run manifest JSON");

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested("motivsim 0.1.0\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!out.empty()) cmd.out = out;
  if (episodes > 0) cmd.episodes = episodes;
  if (test_episodes > 0) cmd.test_episodes = test_episodes;
  cmd.jobs = jobs;
  if (!weights.empty()) cmd.weights_path = weights;
  if (!run_dir.empty()) cmd.run_dir = run_dir;
  if (!manifest.empty()) cmd.manifest_path = manifest;

  if (!layout_path.empty()) {
    cmd.layout_path = layout_path;
    try {
      cmd.layout = load_layout(layout_path);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--layout: ") + e.what());
    }
  }
  if (cmd.manifest_path) {
    try {
      (void)load_manifest(*cmd.manifest_path);
    } catch (const ConfigError& e) {
      throw UsageError(std::string("--manifest: ") + e.what());
    }
  }

  const auto resolved_seed = seed ? seed : env_seed;
  auto need_seed = [&](const char* what) {
    if (!resolved_seed) throw UsageError(std::string(what) + " needs --seed or MOTIVSIM_SEED");
    cmd.seed = *resolved_seed;
  };
  auto need_exp = [&](const char* what) {
    if (exp.empty()) throw UsageError(std::string(what) + " needs --exp");
    try {
      (void)build_config(exp, 0);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
    cmd.experiments = {exp};
  };

  if (*train) {
    cmd.kind = CommandKind::Train;
    if (cmd.manifest_path) {
      const auto m = load_manifest(*cmd.manifest_path);
      cmd.experiments = {m.config.id};
      cmd.seed = m.config.seed;
    } else {
      need_exp("train");
      need_seed("train");
    }
  } else if (*test) {
    cmd.kind = CommandKind::Test;
    if (!cmd.weights_path) throw UsageError("test needs --weights <weights.csv>");
    if (cmd.manifest_path) {
      const auto m = load_manifest(*cmd.manifest_path);
      cmd.experiments = {m.config.id};
      cmd.seed = m.config.seed;
    } else {
      need_exp("test");
      need_seed("test");
    }
  } else if (*report) {
    cmd.kind = CommandKind::Report;
    if (!cmd.run_dir) {
      need_exp("report (without --run)");
      need_seed("report (without --run)");
      cmd.run_dir = cmd.out / (exp + "_" + std::to_string(cmd.seed));
    }
  } else if (*suite) {
    cmd.kind = CommandKind::Suite;
    need_seed("suite");
    cmd.experiments = experiment_ids();
  } else {
    cmd.kind = CommandKind::ValidateConfig;
    if (!cmd.layout_path && !cmd.manifest_path) {
      throw UsageError("validate-config needs --layout and/or --manifest");
    }
  }
  return cmd;
}

int execute(const Command& cmd, std::ostream& log, std::ostream& err) {
  Logger logger(log, cmd.quiet);
  try {
    switch (cmd.kind) {
      case CommandKind::Train:
        run_train(cmd, cmd.experiments.at(0), logger);
        break;
      case CommandKind::Test:
        run_test_cmd(cmd, cmd.experiments.at(0), logger);
        break;
      case CommandKind::Report:
        run_report(cmd, *cmd.run_dir, logger);
        break;
      case CommandKind::ValidateConfig:
        logger.line("configuration ok");
        break;
      case CommandKind::Suite: {
        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::vector<std::string> failures;
        auto worker = [&] {
          for (std::size_t i = next++; i < cmd.experiments.size(); i = next++) {
            try {
              run_suite_job(cmd, cmd.experiments[i], logger);
            } catch (const std::exception& e) {
              std::lock_guard lock(err_mu);
              failures.push_back(cmd.experiments[i] + ": " + e.what());
            }
          }
        };
        const int n = std::max(1, std::min<int>(cmd.jobs, static_cast<int>(cmd.experiments.size())));
        std::vector<std::thread> pool;
        for (int i = 1; i < n; ++i) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        if (!failures.empty()) {
          std::sort(failures.begin(), failures.end());
          for (const auto& f : failures) err << "error: " << f << '\n';
          return kExitFailure;
        }
        break;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(args, seed_from_env());
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return execute(cmd, err, err);
}

}  // namespace motivsim::cli
