#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fairq/game.hpp"
#include "fairq/rng.hpp"

namespace fairq {

enum class RoleScheme : std::uint8_t { Rotating, Random, Fixed };

std::string_view scheme_name(RoleScheme s) noexcept;
std::optional<RoleScheme> parse_scheme(std::string_view name) noexcept;

struct RoundRecord {
  std::uint64_t round = 0;
  int proposer_id = 0;
  int responder_id = 1;
  Level proposer_action = Level::L;
  Level responder_action = Level::L;
  bool success = false;
  double proposer_payoff = 0.0;
  double responder_payoff = 0.0;
  SimState state_before;
  SimState state_after;
  // Indexed by role: {proposer explored, responder explored}.
  std::array<bool, 2> explored{false, false};

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct RunConfig {
  GameParams game;
  LearningParams learn;
  RoleScheme scheme = RoleScheme::Rotating;
  std::uint64_t steps = 2'001'000;
  std::uint64_t transient = 2'000'000;
  std::uint64_t window = 1'000;
  std::uint64_t seed = 0;

  // Parameter invariants plus transient + window <= steps with window >= 1.
  // steps == 0 is accepted as an empty run.
  void validate() const;
};

using AgentPair = std::array<Agent, 2>;

// One round between two agents sharing `state`, with the given proposer.
// Both agents select from their role table at the shared state, receive
// payoffs, and update the played cell. Advances `state` to the joint action.
RoundRecord play_round(AgentPair& agents, SimState& state, int proposer_id, const GameParams& game,
                       const LearningParams& learn, Rng& rng, std::uint64_t round);

// Proposer for `round` under `scheme`. Draws from rng only under Random.
int assign_proposer(RoleScheme scheme, std::uint64_t round, Rng& rng);

RoundRecord step(AgentPair& agents, SimState& state, RoleScheme scheme, const GameParams& game,
                 const LearningParams& learn, Rng& rng, std::uint64_t round);

// A single realization: both agents' tables uniform on (0,1), initial state
// uniform over the nine states, all drawn from the seeded stream.
class TwoPlayerGame {
 public:
  explicit TwoPlayerGame(const RunConfig& config);

  RoundRecord step();

  const AgentPair& agents() const noexcept { return agents_; }
  AgentPair& agents() noexcept { return agents_; }
  SimState state() const noexcept { return state_; }
  std::uint64_t round() const noexcept { return round_; }
  const RunConfig& config() const noexcept { return config_; }

 private:
  RunConfig config_;
  Rng rng_;
  AgentPair agents_;
  SimState state_;
  std::uint64_t round_ = 0;
};

// Runs config.steps rounds and hands each record to `sink`.
template <typename Sink>
void run(const RunConfig& config, Sink&& sink) {
  config.validate();
  TwoPlayerGame game(config);
  for (std::uint64_t t = 0; t < config.steps; ++t) sink(game.step());
}

std::vector<RoundRecord> run(const RunConfig& config);

}  // namespace fairq
