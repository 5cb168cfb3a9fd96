#pragma once

// Game and learning kernel: three-level ultimatum game, joint-action states,
// per-role Q-tables, epsilon-greedy selection and the tabular Q update.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fairq/rng.hpp"

namespace fairq {

inline constexpr int kNumLevels = 3;
inline constexpr int kNumStates = 9;

// An offer level when proposing, an acceptance threshold when responding.
enum class Level : std::uint8_t { L = 0, M = 1, H = 2 };

enum class Role : std::uint8_t { Proposer = 0, Responder = 1 };

constexpr int index(Level a) noexcept { return static_cast<int>(a); }
constexpr int index(Role r) noexcept { return static_cast<int>(r); }
constexpr Level level_from_index(int i) noexcept { return static_cast<Level>(i); }

inline constexpr std::array<Level, kNumLevels> kAllLevels = {Level::L, Level::M, Level::H};

char level_char(Level a) noexcept;
std::string_view role_name(Role r) noexcept;

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GameParams {
  double l = 0.3;
  double m = 0.5;
  double h = 0.8;

  // Requires 0 < l < m = 0.5 < h < 1.
  void validate() const;

  constexpr double value(Level a) const noexcept {
    switch (a) {
      case Level::L: return l;
      case Level::M: return m;
      case Level::H: return h;
    }
    return m;
  }
};

struct LearningParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon = 0.01;

  // Requires alpha in (0,1], gamma in [0,1), epsilon in [0,1].
  void validate() const;
};

// The previous round's joint action. Index 0..8 follows s1..s9 ordering:
// index = 3 * proposer + responder.
struct SimState {
  Level proposer = Level::L;
  Level responder = Level::L;

  constexpr int index() const noexcept { return 3 * fairq::index(proposer) + fairq::index(responder); }
  // 1-based label, s1..s9.
  constexpr int number() const noexcept { return index() + 1; }

  static constexpr SimState from_index(int i) noexcept {
    return {level_from_index(i / 3), level_from_index(i % 3)};
  }

  friend constexpr bool operator==(SimState, SimState) noexcept = default;
};

class QTable {
 public:
  QTable() { values_.fill(0.0); }

  double& at(SimState s, Level a) noexcept { return values_[cell(s, a)]; }
  double at(SimState s, Level a) const noexcept { return values_[cell(s, a)]; }

  std::span<const double, kNumLevels> row(SimState s) const noexcept {
    return std::span<const double, kNumLevels>(values_.data() + kNumLevels * s.index(), kNumLevels);
  }
  std::span<double, kNumLevels> row(SimState s) noexcept {
    return std::span<double, kNumLevels>(values_.data() + kNumLevels * s.index(), kNumLevels);
  }

  double row_max(SimState s) const noexcept {
    const auto r = row(s);
    const double a = r[0] > r[1] ? r[0] : r[1];
    return a > r[2] ? a : r[2];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  static constexpr std::size_t cell(SimState s, Level a) noexcept {
    return static_cast<std::size_t>(kNumLevels * s.index() + fairq::index(a));
  }
  std::array<double, kNumStates * kNumLevels> values_;
};

// One table per role.
struct Agent {
  QTable proposer;
  QTable responder;

  QTable& table(Role r) noexcept { return r == Role::Proposer ? proposer : responder; }
  const QTable& table(Role r) const noexcept { return r == Role::Proposer ? proposer : responder; }

  friend bool operator==(const Agent&, const Agent&) = default;
};

// Success iff offer >= threshold. Level ordering matches value ordering.
constexpr bool deal_succeeds(Level proposer_action, Level responder_action) noexcept {
  return index(proposer_action) >= index(responder_action);
}

// Proposer: 1 - p on success. Responder: p on success. Zero otherwise.
// `own_action` is interpreted according to `role`.
inline double payoff(Role role, Level own_action, Level opponent_action,
                     const GameParams& game) noexcept {
  const Level offer = role == Role::Proposer ? own_action : opponent_action;
  const Level threshold = role == Role::Proposer ? opponent_action : own_action;
  if (!deal_succeeds(offer, threshold)) return 0.0;
  const double p = game.value(offer);
  return role == Role::Proposer ? 1.0 - p : p;
}

// All 27 entries i.i.d. uniform on (0,1).
QTable init_qtable(Rng& rng);

// Row argmax with uniform tie-breaking. Draws from rng only on ties.
inline Level greedy_action(const QTable& table, SimState state, Rng& rng) {
  const auto r = table.row(state);
  int best = r[1] > r[0] ? 1 : 0;
  best = r[2] > r[best] ? 2 : best;
  const double top = r[best];
  const int ties = int{r[0] == top} + int{r[1] == top} + int{r[2] == top};
  if (ties == 1) [[likely]] return level_from_index(best);
  std::array<int, kNumLevels> tied{};
  int n = 0;
  for (int a = 0; a < kNumLevels; ++a) {
    if (r[a] == top) tied[n++] = a;
  }
  return level_from_index(tied[rng.below(static_cast<std::uint32_t>(n))]);
}

struct Selection {
  Level action;
  bool explored;
};

// Epsilon-greedy: with probability epsilon a uniform draw over all three
// levels, otherwise greedy_action. No draw is consumed when epsilon == 0.
inline Selection select_action(const QTable& table, SimState state, double epsilon, Rng& rng) {
  if (epsilon > 0.0 && rng.uniform() < epsilon) {
    return {level_from_index(static_cast<int>(rng.below(kNumLevels))), true};
  }
  return {greedy_action(table, state, rng), false};
}

// Q(s,a) <- (1-alpha) Q(s,a) + alpha (reward + gamma max_a' Q(next,a')),
// bootstrapping from the same table. The max is read before the write.
inline void q_update(QTable& table, SimState state, Level action, double reward,
                     SimState next_state, const LearningParams& learn) noexcept {
  const double target = reward + learn.gamma * table.row_max(next_state);
  double& q = table.at(state, action);
  q = (1.0 - learn.alpha) * q + learn.alpha * target;
}

}  // namespace fairq
