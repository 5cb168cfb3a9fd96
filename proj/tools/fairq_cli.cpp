#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairq/config.hpp"
#include "fairq/experiment.hpp"

namespace {

struct Subcommand {
  fairq::Mode mode;
  CLI::App* app = nullptr;
  std::string config;
  std::map<std::string, std::string> flags;
};

const char* describe(fairq::Mode m) {
  switch (m) {
    case fairq::Mode::Run: return "Time series, window fractions and preference snapshots for one parameter set";
    case fairq::Mode::ScanLearning: return "Steady-state fractions over an (alpha, gamma) grid";
    case fairq::Mode::ScanGame: return "Steady-state fractions over an (l, h) grid";
    case fairq::Mode::Transitions: return "Joint, conditional and net-flow transition matrices per window";
    case fairq::Mode::Lattice: return "Ring lattice population with nearest-neighbour games";
    case fairq::Mode::TheoryBoundary: return "Analytical alpha boundary over a gamma grid";
  }
  return "";
}

std::string key_help(const std::string& key) {
  static const std::map<std::string, std::string> help{
      {"alpha", "learning rate in (0,1]"},
      {"gamma", "discount factor in [0,1)"},
      {"epsilon", "exploration rate in [0,1]"},
      {"l", "low offer, 0 < l < 0.5"},
      {"h", "high offer, 0.5 < h < 1"},
      {"scheme", "role assignment: rotating, random or fixed"},
      {"steps", "rounds per realization (default transient + window)"},
      {"transient", "rounds discarded before the measurement window"},
      {"window", "measurement window length in rounds"},
      {"seed", "master seed"},
      {"ensemble", "realizations per grid point"},
      {"out", "output directory"},
      {"threads", "worker threads, 0 for all cores"},
      {"bin", "time-series bin width, 0 for steps/1000"},
      {"preference-every", "rounds between Q-table preference snapshots"},
      {"alpha-grid", "start:end:count or comma list"},
      {"gamma-grid", "start:end:count or comma list"},
      {"l-grid", "start:end:count or comma list"},
      {"h-grid", "start:end:count or comma list"},
      {"windows", "start:end[,start:end...] transition windows"},
      {"n", "ring size"},
  };
  const auto it = help.find(key);
  return it == help.end() ? std::string() : it->second;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-learning agents playing a three-level ultimatum game"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  using fairq::Mode;
  std::vector<Subcommand> subs;
  for (Mode m : {Mode::Run, Mode::ScanLearning, Mode::ScanGame, Mode::Transitions, Mode::Lattice,
                 Mode::TheoryBoundary}) {
    subs.push_back({m});
  }
  for (Subcommand& s : subs) {
    s.app = app.add_subcommand(std::string(fairq::mode_name(s.mode)), describe(s.mode));
    s.app->add_option("--config", s.config, "key=value file; flags take precedence");
    for (const fairq::KeyDefault& kd : fairq::keys_for(s.mode)) {
      const std::string k(kd.key);
      auto* opt = s.app->add_option("--" + k, s.flags[k], key_help(k));
      opt->default_str(kd.value.empty() ? "derived" : std::string(kd.value));
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (Subcommand& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      std::vector<fairq::Setting> settings;
      if (!s.config.empty()) settings = fairq::read_config_file(s.config);
      for (const auto& [key, value] : s.flags) {
        if (s.app->count("--" + key) != 0) settings.push_back({key, value, "--" + key});
      }
      const fairq::ExperimentSpec spec = fairq::build_spec(s.mode, settings);
      const fairq::ExperimentResult result = fairq::run_experiment(spec);
      std::cout << result.summary_json;
    } catch (const fairq::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const fairq::InvalidParameter& e) {
      std::cerr << "invalid parameter: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}
