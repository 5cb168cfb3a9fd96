#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairq/lattice.hpp"
#include "fairq/metrics.hpp"
#include "fairq/two_player.hpp"

namespace fairq {

enum class Mode { Run, ScanLearning, ScanGame, Transitions, Lattice, TheoryBoundary };

std::string_view mode_name(Mode m) noexcept;
std::optional<Mode> parse_mode(std::string_view name) noexcept;

// Raised for malformed or out-of-range settings. `where` names the config
// line ("exp.cfg:3") or flag ("--alpha").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

struct Setting {
  std::string key;
  std::string value;
  std::string origin;  // "file:line" or "--flag"
};

struct ExperimentSpec {
  Mode mode = Mode::Run;
  // Game, learning parameters, scheme and the step/transient/window
  // protocol. run.seed holds the master seed.
  RunConfig run;
  int lattice_n = 50;
  std::vector<double> alpha_grid;
  std::vector<double> gamma_grid;
  std::vector<double> l_grid;
  std::vector<double> h_grid;
  std::vector<Window> windows;
  int ensemble = 100;
  std::filesystem::path out = ".";
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t bin = 0;  // 0: ceil(steps / 1000)
  std::uint64_t preference_every = 1000;
  // Effective key=value settings after defaults and overrides, recorded in
  // output metadata.
  std::map<std::string, std::string> settings;

  std::uint64_t master_seed() const noexcept { return run.seed; }
  std::uint64_t bin_width() const noexcept;
};

// Parses flat `key = value` text. '#' starts a comment; blank lines are
// skipped. Errors name `source:line`.
std::vector<Setting> parse_key_values(std::string_view text, std::string_view source);

std::vector<Setting> read_config_file(const std::filesystem::path& path);

struct KeyDefault {
  std::string_view key;
  std::string_view value;  // empty: derived from other keys
};

// Known keys for a mode with their defaults, in documentation order.
std::vector<KeyDefault> keys_for(Mode mode);

// Applies defaults, then `settings` in order (later entries win), validates
// ranges and cross-field invariants. Unknown or inapplicable keys are errors.
ExperimentSpec build_spec(Mode mode, const std::vector<Setting>& settings);

// "a0:a1:n" (n evenly spaced points, inclusive) or a comma-separated list.
std::vector<double> parse_grid(std::string_view text);

// "start:end[,start:end...]".
std::vector<Window> parse_windows(std::string_view text);

}  // namespace fairq
