#include "fairq/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace fairq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::size_t u(int i) noexcept { return static_cast<std::size_t>(i); }
constexpr std::size_t u(Level a) noexcept { return static_cast<std::size_t>(index(a)); }

}  // namespace

FractionPoint fractions(const RoundRecord& record) {
  FractionPoint f;
  f.proposer[u(record.proposer_action)] = 1.0;
  f.responder[u(record.responder_action)] = 1.0;
  f.state[u(record.state_after.index())] = 1.0;
  return f;
}

// DealStats

void DealStats::merge(const DealStats& other) noexcept {
  for (std::size_t p = 0; p < kNumLevels; ++p) {
    for (std::size_t q = 0; q < kNumLevels; ++q) joint_[p][q] += other.joint_[p][q];
  }
}

std::uint64_t DealStats::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : joint_) n += std::accumulate(row.begin(), row.end(), std::uint64_t{0});
  return n;
}

std::uint64_t DealStats::attempts(Role role, Level option) const noexcept {
  std::uint64_t n = 0;
  for (std::size_t other = 0; other < kNumLevels; ++other) {
    n += role == Role::Proposer ? joint_[u(option)][other] : joint_[other][u(option)];
  }
  return n;
}

std::uint64_t DealStats::successes(Role role, Level option) const noexcept {
  std::uint64_t n = 0;
  for (Level other : kAllLevels) {
    const Level p = role == Role::Proposer ? option : other;
    const Level q = role == Role::Proposer ? other : option;
    if (deal_succeeds(p, q)) n += joint_[u(p)][u(q)];
  }
  return n;
}

std::uint64_t DealStats::total_successes() const noexcept {
  std::uint64_t n = 0;
  for (Level p : kAllLevels) n += successes(Role::Proposer, p);
  return n;
}

double DealStats::payoff_sum(Role role, Level option, const GameParams& game) const noexcept {
  double sum = 0.0;
  for (Level other : kAllLevels) {
    const Level p = role == Role::Proposer ? option : other;
    const Level q = role == Role::Proposer ? other : option;
    const std::uint64_t n = joint_[u(p)][u(q)];
    if (n != 0) sum += static_cast<double>(n) * payoff(role, option, other, game);
  }
  return sum;
}

double DealStats::success_rate(Role role, Level option) const noexcept {
  const std::uint64_t n = attempts(role, option);
  return n == 0 ? kNaN : static_cast<double>(successes(role, option)) / static_cast<double>(n);
}

double DealStats::mean_payoff(Role role, Level option, const GameParams& game) const noexcept {
  const std::uint64_t n = attempts(role, option);
  return n == 0 ? kNaN : payoff_sum(role, option, game) / static_cast<double>(n);
}

double DealStats::deal_rate() const noexcept {
  const std::uint64_t n = total();
  return n == 0 ? kNaN : static_cast<double>(total_successes()) / static_cast<double>(n);
}

DealStats deal_stats_update(DealStats stats, const RoundRecord& record) {
  stats.add(record);
  return stats;
}

// RoundCounts

void RoundCounts::merge(const RoundCounts& other) noexcept {
  deals_.merge(other.deals_);
  for (std::size_t s = 0; s < kNumStates; ++s) state_[s] += other.state_[s];
}

FractionPoint RoundCounts::fractions() const {
  const std::uint64_t n = rounds();
  if (n == 0) throw EmptyWindow("no rounds recorded");
  const double d = static_cast<double>(n);
  FractionPoint f;
  for (Level a : kAllLevels) {
    f.proposer[u(a)] = static_cast<double>(proposer_count(a)) / d;
    f.responder[u(a)] = static_cast<double>(responder_count(a)) / d;
  }
  for (std::size_t s = 0; s < kNumStates; ++s) f.state[s] = static_cast<double>(state_[s]) / d;
  return f;
}

// TimeSeries

TimeSeries::TimeSeries(std::uint64_t steps, std::uint64_t bin_width) : bin_width_(bin_width) {
  if (bin_width == 0) throw InvalidParameter("time-series bin width must be >= 1");
  bins_.resize(static_cast<std::size_t>((steps + bin_width - 1) / bin_width));
}

void TimeSeries::merge(const TimeSeries& other) {
  if (other.bin_width_ != bin_width_ || other.bins_.size() != bins_.size()) {
    throw std::invalid_argument("cannot merge time series with different binning");
  }
  for (std::size_t i = 0; i < bins_.size(); ++i) bins_[i].merge(other.bins_[i]);
}

// EnsembleAverage

double EnsembleAverage::mean() const {
  if (count_ == 0) throw EmptyWindow("ensemble average over zero realizations");
  return sum_ / static_cast<double>(count_);
}

double EnsembleAverage::variance() const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  const double m = sum_ / n;
  const double v = (sum_sq_ - n * m * m) / (n - 1.0);
  return v < 0.0 ? 0.0 : v;
}

double ensemble_average(std::span<const double> values) {
  if (values.empty()) throw EmptyWindow("ensemble average over zero realizations");
  EnsembleAverage acc;
  for (double v : values) acc.add(v);
  return acc.mean();
}

// TransitionStats

void TransitionStats::merge(const TransitionStats& other) noexcept {
  for (std::size_t i = 0; i < kNumStates; ++i) {
    for (std::size_t j = 0; j < kNumStates; ++j) counts_[i][j] += other.counts_[i][j];
  }
}

std::uint64_t TransitionStats::row_total(int from) const noexcept {
  const auto& row = counts_[u(from)];
  return std::accumulate(row.begin(), row.end(), std::uint64_t{0});
}

std::uint64_t TransitionStats::total() const noexcept {
  std::uint64_t n = 0;
  for (int i = 0; i < kNumStates; ++i) n += row_total(i);
  return n;
}

Matrix9 joint_probabilities(const TransitionStats& stats) {
  const std::uint64_t n = stats.total();
  if (n == 0) throw EmptyWindow("joint probabilities of an empty window");
  Matrix9 p{};
  for (int i = 0; i < kNumStates; ++i) {
    for (int j = 0; j < kNumStates; ++j) {
      p[u(i)][u(j)] = static_cast<double>(stats.count(i, j)) / static_cast<double>(n);
    }
  }
  return p;
}

Matrix9 net_flow(const Matrix9& joint) {
  Matrix9 d{};
  for (std::size_t i = 0; i < kNumStates; ++i) {
    for (std::size_t j = 0; j < kNumStates; ++j) d[i][j] = joint[i][j] - joint[j][i];
  }
  return d;
}

Matrix9 conditional_probabilities(const TransitionStats& stats) {
  Matrix9 c{};
  for (int i = 0; i < kNumStates; ++i) {
    const std::uint64_t row = stats.row_total(i);
    for (int j = 0; j < kNumStates; ++j) {
      c[u(i)][u(j)] = row == 0 ? kNaN
                               : static_cast<double>(stats.count(i, j)) / static_cast<double>(row);
    }
  }
  return c;
}

TransitionNetwork transition_network(const TransitionStats& stats, double threshold) {
  TransitionNetwork net;
  const std::uint64_t n = stats.total();
  for (int i = 0; i < kNumStates; ++i) {
    const std::uint64_t row = stats.row_total(i);
    if (n != 0) net.occupancy[u(i)] = static_cast<double>(row) / static_cast<double>(n);
    if (row == 0) continue;
    for (int j = 0; j < kNumStates; ++j) {
      const double p = static_cast<double>(stats.count(i, j)) / static_cast<double>(row);
      if (p >= threshold) net.edges.push_back({i, j, p});
    }
  }
  return net;
}

// WindowedTransitions

WindowedTransitions::WindowedTransitions(std::vector<Window> windows)
    : windows_(std::move(windows)), stats_(windows_.size()) {
  for (const Window& w : windows_) {
    if (w.end <= w.start) throw InvalidParameter("transition window must satisfy start < end");
  }
}

void WindowedTransitions::merge(const WindowedTransitions& other) {
  if (other.windows_ != windows_) throw std::invalid_argument("cannot merge different windows");
  for (std::size_t i = 0; i < stats_.size(); ++i) stats_[i].merge(other.stats_[i]);
}

// PreferenceStats

void PreferenceStats::add_row(const QTable& table, SimState state) noexcept {
  const auto r = table.row(state);
  const double top = table.row_max(state);
  std::uint64_t ties = 0;
  for (double v : r) ties += v == top ? 1 : 0;
  const std::uint64_t share = kUnit / ties;
  auto& mass = mass_[u(state.index())];
  for (std::size_t a = 0; a < kNumLevels; ++a) {
    if (r[a] == top) mass[a] += share;
  }
  ++samples_[u(state.index())];
}

void PreferenceStats::add_table(const QTable& table) noexcept {
  for (int s = 0; s < kNumStates; ++s) add_row(table, SimState::from_index(s));
}

void PreferenceStats::merge(const PreferenceStats& other) noexcept {
  for (std::size_t s = 0; s < kNumStates; ++s) {
    samples_[s] += other.samples_[s];
    for (std::size_t a = 0; a < kNumLevels; ++a) mass_[s][a] += other.mass_[s][a];
  }
}

std::array<double, kNumLevels> PreferenceStats::distribution(int state_index) const noexcept {
  std::array<double, kNumLevels> d{};
  const std::uint64_t n = samples_[u(state_index)];
  for (std::size_t a = 0; a < kNumLevels; ++a) {
    d[a] = n == 0 ? kNaN
                  : static_cast<double>(mass_[u(state_index)][a]) / static_cast<double>(n * kUnit);
  }
  return d;
}

PreferenceStats preference_snapshot(std::span<const Agent> agents, Role role) {
  PreferenceStats stats;
  for (const Agent& a : agents) stats.add_table(a.table(role));
  return stats;
}

}  // namespace fairq
