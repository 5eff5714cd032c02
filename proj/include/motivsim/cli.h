#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "motivsim/env.h"

namespace motivsim::cli {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help / --version; carries the text to print (exit 0).
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CommandKind { Train, Test, Report, Suite, ValidateConfig };

struct Command {
  CommandKind kind = CommandKind::Train;
  std::vector<std::string> experiments;  // expanded to all 12 for suite
  std::uint64_t seed = 0;
  std::filesystem::path out = "runs";
  std::optional<std::filesystem::path> layout_path;
  Layout layout = default_layout();
  std::optional<std::filesystem::path> manifest_path;
  std::optional<std::filesystem::path> weights_path;
  std::optional<std::filesystem::path> run_dir;
  std::optional<int> episodes;
  std::optional<int> test_episodes;
  std::size_t window = 100;
  std::size_t final_episodes = 500;
  bool signed_drive = false;
  bool terminal_depletion = false;
  bool force = false;
  int jobs = 1;
  bool quiet = false;
};

/// argv[0] is the program name. `env_seed` stands in for MOTIVSIM_SEED.
/// Throws UsageError or HelpRequested.
Command parse_args(const std::vector<std::string>& args,
                   std::optional<std::uint64_t> env_seed = std::nullopt);

/// Runs the command; diagnostics go to `err`, progress to `log`.
int execute(const Command& cmd, std::ostream& log, std::ostream& err);

/// parse_args + execute with the exit-status mapping; what main() calls.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace motivsim::cli
