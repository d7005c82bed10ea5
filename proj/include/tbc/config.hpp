#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "tbc/params.hpp"
#include "tbc/table.hpp"

namespace tbc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by parse_config for --help; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { spectrum, single_atom, channel_evolve, walk, rate, fcs_energy, fcs_position, verify_all };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct RunConfig {
  explicit RunConfig(const ModelParams& p) : params(p) {}

  ModelParams params;
  Experiment experiment = Experiment::walk;
  int n = 0;               // interactions (walk, channel-evolve, fcs-*), time span in tau (single-atom)
  std::int64_t trials = 0; // Monte Carlo trials (walk)
  std::uint64_t seed = 1;
  int window = 0;          // half width of the lattice window (spectrum, fcs-energy)
  int M = 0;               // atoms in the reservoir (fcs-energy)
  int points = 0;          // grid points (rate, single-atom)
  int check = 0;           // verify-all: run only this check, 0 = all
  OutputFormat format = OutputFormat::csv;
  std::string output;      // empty: standard output or the default output directory
};

/// Recognized keys, shared by config files and command-line flags:
/// E F lambda tau beta experiment n trials seed window M points check format output.
/// Unknown keys, malformed numbers and missing model parameters raise
/// ConfigError naming the key; invalid model parameters raise InvalidParams.
RunConfig config_from_settings(const std::map<std::string, std::string>& settings);

/// "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Flags --E --F --lambda --tau --beta --config --format --output, then a
/// subcommand naming the experiment with --n --trials --seed --window --M
/// --points --check. Flags override values from --config.
RunConfig parse_config(int argc, const char* const* argv);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "TBCURRENT_OUTPUT_DIR";

/// Output path for cfg: "-" means standard output; an empty output falls back
/// to $TBCURRENT_OUTPUT_DIR/<experiment>.<csv|json> when the variable is set;
/// relative paths are placed under the variable's directory when it is set.
std::string resolve_output_path(const RunConfig& cfg);

}  // namespace tbc
