#pragma once

// Ensemble orchestration. Realizations are independent work items seeded by
// derive_seed(master, grid_index, realization); their integer accumulators
// are merged as they finish, which gives the same totals for any thread
// count or completion order.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairq/config.hpp"
#include "fairq/lattice.hpp"
#include "fairq/metrics.hpp"
#include "fairq/two_player.hpp"

namespace fairq {

class RealizationError : public std::runtime_error {
 public:
  RealizationError(std::uint64_t grid_index, std::uint64_t realization, std::uint64_t seed,
                   const std::string& what);
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

// What to record per realization besides the steady-state window.
struct ObservationPlan {
  std::uint64_t bin = 0;  // time-series bin width; 0 disables the series
  std::vector<Window> windows;  // transition windows
  std::uint64_t preference_every = 0;  // 0 disables preference snapshots
};

struct PreferenceSeries {
  // Indexed by snapshot (round = i * every) then role.
  std::vector<std::array<PreferenceStats, 2>> unconditional;
  // Only the row of the state the realization currently occupies.
  std::vector<std::array<PreferenceStats, 2>> conditional;

  void merge(const PreferenceSeries& other);
};

struct Observation {
  RoundCounts window;  // rounds in [transient, transient + window)
  std::optional<TimeSeries> series;
  std::optional<WindowedTransitions> transitions;
  std::optional<PreferenceSeries> preferences;

  void merge(const Observation& other);
};

Observation observe_two_player(const RunConfig& config, const ObservationPlan& plan);
Observation observe_lattice(const LatticeConfig& config, const ObservationPlan& plan);

struct EnsembleResult {
  Observation merged;
  // Window fractions of each realization, by realization index.
  std::vector<FractionPoint> realizations;
};

unsigned resolve_threads(unsigned requested) noexcept;

// config.seed is ignored; realization k runs with
// derive_seed(master, grid_index, k).
EnsembleResult run_ensemble(const RunConfig& config, int realizations, std::uint64_t master,
                            std::uint64_t grid_index, const ObservationPlan& plan, unsigned threads = 0);

EnsembleResult run_lattice_ensemble(const LatticeConfig& config, int realizations, std::uint64_t master,
                                    const ObservationPlan& plan, unsigned threads = 0);

// Runs every grid point with `realizations` each; grid index g enumerates
// configs in order.
std::vector<RoundCounts> run_grid(const std::vector<RunConfig>& configs, int realizations,
                                  std::uint64_t master, unsigned threads = 0);

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  std::string summary_json;
};

// Dispatches on spec.mode, writes CSV files plus .meta.json sidecars into
// spec.out, and returns a JSON summary.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Column sets of the CSV outputs.
std::vector<std::string> time_series_columns();
std::vector<std::string> heatmap_columns();
std::vector<std::string> transitions_columns();
std::vector<std::string> preferences_columns();
std::vector<std::string> boundary_columns();

}  // namespace fairq
