#pragma once

// Accumulators that turn round records into observables. Everything that is
// merged across realizations is kept as integer counts so that merging is
// exact and independent of merge order.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairq/game.hpp"
#include "fairq/two_player.hpp"

namespace fairq {

using Matrix9 = std::array<std::array<double, kNumStates>, kNumStates>;

class EmptyWindow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Indicator fractions of a single record, or averages over many.
struct FractionPoint {
  std::array<double, kNumLevels> proposer{};
  std::array<double, kNumLevels> responder{};
  std::array<double, kNumStates> state{};
};

// Per-role normalization: one proposer and one responder per record.
// The state entry is the indicator of state_after.
FractionPoint fractions(const RoundRecord& record);

// Counts of one proposer/responder role instance per record, keyed by joint
// action. Option counts, deal outcomes and payoffs all derive from the 3x3
// joint-action counts.
class DealStats {
 public:
  DealStats() = default;

  void add(const RoundRecord& record) noexcept {
    ++joint_[static_cast<std::size_t>(index(record.proposer_action))]
            [static_cast<std::size_t>(index(record.responder_action))];
  }
  void add(Level proposer_action, Level responder_action, std::uint64_t count = 1) noexcept {
    joint_[static_cast<std::size_t>(index(proposer_action))]
          [static_cast<std::size_t>(index(responder_action))] += count;
  }
  void merge(const DealStats& other) noexcept;

  std::uint64_t total() const noexcept;
  std::uint64_t attempts(Role role, Level option) const noexcept;
  std::uint64_t successes(Role role, Level option) const noexcept;
  std::uint64_t total_successes() const noexcept;
  // Sum of payoffs received by `role` when playing `option`.
  double payoff_sum(Role role, Level option, const GameParams& game) const noexcept;

  // NaN when the option was never played.
  double success_rate(Role role, Level option) const noexcept;
  double mean_payoff(Role role, Level option, const GameParams& game) const noexcept;
  // NaN when empty.
  double deal_rate() const noexcept;

  friend bool operator==(const DealStats&, const DealStats&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumLevels>, kNumLevels> joint_{};
};

DealStats deal_stats_update(DealStats stats, const RoundRecord& record);

// Option and state occupancy counts plus deal statistics over a set of
// rounds.
class RoundCounts {
 public:
  void add(const RoundRecord& record) noexcept {
    deals_.add(record);
    ++state_[static_cast<std::size_t>(record.state_after.index())];
  }
  void merge(const RoundCounts& other) noexcept;

  std::uint64_t rounds() const noexcept { return deals_.total(); }
  std::uint64_t proposer_count(Level a) const noexcept { return deals_.attempts(Role::Proposer, a); }
  std::uint64_t responder_count(Level a) const noexcept { return deals_.attempts(Role::Responder, a); }
  std::uint64_t state_count(int state_index) const noexcept {
    return state_[static_cast<std::size_t>(state_index)];
  }
  const DealStats& deals() const noexcept { return deals_; }

  // Throws EmptyWindow when no rounds were recorded.
  FractionPoint fractions() const;

  friend bool operator==(const RoundCounts&, const RoundCounts&) = default;

 private:
  DealStats deals_;
  std::array<std::uint64_t, kNumStates> state_{};
};

// Fixed-width time bins of RoundCounts, keyed by record.round.
class TimeSeries {
 public:
  TimeSeries(std::uint64_t steps, std::uint64_t bin_width);

  void add(const RoundRecord& record) noexcept {
    bins_[static_cast<std::size_t>(record.round / bin_width_)].add(record);
  }
  void merge(const TimeSeries& other);

  std::uint64_t bin_width() const noexcept { return bin_width_; }
  std::span<const RoundCounts> bins() const noexcept { return bins_; }
  std::uint64_t bin_start(std::size_t i) const noexcept { return i * bin_width_; }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::uint64_t bin_width_;
  std::vector<RoundCounts> bins_;
};

// Mean and variance over per-realization values.
class EnsembleAverage {
 public:
  void add(double value) noexcept {
    ++count_;
    sum_ += value;
    sum_sq_ += value * value;
  }
  void merge(const EnsembleAverage& other) noexcept {
    count_ += other.count_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
  }

  std::uint64_t count() const noexcept { return count_; }
  // Throws EmptyWindow when count() == 0.
  double mean() const;
  // Unbiased sample variance; 0 for a single value.
  double variance() const;

 private:
  std::uint64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

// Arithmetic mean. Throws EmptyWindow on empty input.
double ensemble_average(std::span<const double> values);

// Counts over consecutive state pairs (s_t, s_{t+1}).
class TransitionStats {
 public:
  void add(SimState from, SimState to, std::uint64_t count = 1) noexcept {
    counts_[static_cast<std::size_t>(from.index())][static_cast<std::size_t>(to.index())] += count;
  }
  void add(const RoundRecord& record) noexcept { add(record.state_before, record.state_after); }
  void merge(const TransitionStats& other) noexcept;

  std::uint64_t count(int from, int to) const noexcept {
    return counts_[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
  }
  std::uint64_t row_total(int from) const noexcept;
  std::uint64_t total() const noexcept;

  friend bool operator==(const TransitionStats&, const TransitionStats&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumStates>, kNumStates> counts_{};
};

// P[i][j] = count(i,j) / total. Throws EmptyWindow when total == 0.
Matrix9 joint_probabilities(const TransitionStats& stats);

// dP[i][j] = P[i][j] - P[j][i].
Matrix9 net_flow(const Matrix9& joint);

// p(j | i), NaN on rows without outgoing counts.
Matrix9 conditional_probabilities(const TransitionStats& stats);

struct NetworkEdge {
  int from = 0;  // state index 0..8
  int to = 0;
  double probability = 0.0;

  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

struct TransitionNetwork {
  std::vector<NetworkEdge> edges;
  // Marginal distribution of s_t over the window.
  std::array<double, kNumStates> occupancy{};
};

// Edges with p(s'|s) >= threshold, in row-major order. Rows without counts
// emit nothing. Occupancy is zero everywhere for an empty window.
TransitionNetwork transition_network(const TransitionStats& stats, double threshold);

struct Window {
  std::uint64_t start = 0;
  std::uint64_t end = 0;  // exclusive

  bool contains(std::uint64_t round) const noexcept { return round >= start && round < end; }
  friend bool operator==(const Window&, const Window&) = default;
};

// One TransitionStats per window; a record counts toward every window that
// contains its round.
class WindowedTransitions {
 public:
  explicit WindowedTransitions(std::vector<Window> windows);

  void add(const RoundRecord& record) noexcept {
    for (std::size_t i = 0; i < windows_.size(); ++i) {
      if (windows_[i].contains(record.round)) stats_[i].add(record);
    }
  }
  void merge(const WindowedTransitions& other);

  std::span<const Window> windows() const noexcept { return windows_; }
  std::span<const TransitionStats> stats() const noexcept { return stats_; }

 private:
  std::vector<Window> windows_;
  std::vector<TransitionStats> stats_;
};

// Argmax preference per state row, with tied maximizers sharing the mass.
// Mass is kept in sixths so ties of two and three stay integral.
class PreferenceStats {
 public:
  static constexpr std::uint64_t kUnit = 6;

  void add_table(const QTable& table) noexcept;
  void add_row(const QTable& table, SimState state) noexcept;
  void merge(const PreferenceStats& other) noexcept;

  // Tables contributing to the state's row.
  std::uint64_t samples(int state_index) const noexcept {
    return samples_[static_cast<std::size_t>(state_index)];
  }
  // Distribution over maximizing actions; NaN when no samples.
  std::array<double, kNumLevels> distribution(int state_index) const noexcept;

  friend bool operator==(const PreferenceStats&, const PreferenceStats&) = default;

 private:
  std::array<std::array<std::uint64_t, kNumLevels>, kNumStates> mass_{};
  std::array<std::uint64_t, kNumStates> samples_{};
};

// Snapshot of the `role` tables of every agent given.
PreferenceStats preference_snapshot(std::span<const Agent> agents, Role role);

}  // namespace fairq
