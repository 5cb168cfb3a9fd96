#include "fairq/two_player.hpp"

#include <string>

namespace fairq {

std::string_view scheme_name(RoleScheme s) noexcept {
  switch (s) {
    case RoleScheme::Rotating: return "rotating";
    case RoleScheme::Random: return "random";
    case RoleScheme::Fixed: return "fixed";
  }
  return "rotating";
}

std::optional<RoleScheme> parse_scheme(std::string_view name) noexcept {
  if (name == "rotating") return RoleScheme::Rotating;
  if (name == "random") return RoleScheme::Random;
  if (name == "fixed") return RoleScheme::Fixed;
  return std::nullopt;
}

void RunConfig::validate() const {
  game.validate();
  learn.validate();
  if (steps == 0) return;
  if (window < 1) throw InvalidParameter("window must be >= 1");
  if (transient + window > steps) {
    throw InvalidParameter("transient + window (" + std::to_string(transient + window) +
                           ") exceeds steps (" + std::to_string(steps) + ")");
  }
}

RoundRecord play_round(AgentPair& agents, SimState& state, int proposer_id, const GameParams& game,
                       const LearningParams& learn, Rng& rng, std::uint64_t round) {
  const int responder_id = 1 - proposer_id;
  QTable& ptable = agents[proposer_id].proposer;
  QTable& rtable = agents[responder_id].responder;

  const Selection offer = select_action(ptable, state, learn.epsilon, rng);
  const Selection threshold = select_action(rtable, state, learn.epsilon, rng);

  RoundRecord rec;
  rec.round = round;
  rec.proposer_id = proposer_id;
  rec.responder_id = responder_id;
  rec.proposer_action = offer.action;
  rec.responder_action = threshold.action;
  rec.success = deal_succeeds(offer.action, threshold.action);
  rec.proposer_payoff = payoff(Role::Proposer, offer.action, threshold.action, game);
  rec.responder_payoff = payoff(Role::Responder, threshold.action, offer.action, game);
  rec.state_before = state;
  rec.state_after = SimState{offer.action, threshold.action};
  rec.explored = {offer.explored, threshold.explored};

  q_update(ptable, state, offer.action, rec.proposer_payoff, rec.state_after, learn);
  q_update(rtable, state, threshold.action, rec.responder_payoff, rec.state_after, learn);

  state = rec.state_after;
  return rec;
}

int assign_proposer(RoleScheme scheme, std::uint64_t round, Rng& rng) {
  switch (scheme) {
    case RoleScheme::Rotating: return static_cast<int>(round % 2);
    case RoleScheme::Random: return static_cast<int>(rng.below(2));
    case RoleScheme::Fixed: return 0;
  }
  return 0;
}

RoundRecord step(AgentPair& agents, SimState& state, RoleScheme scheme, const GameParams& game,
                 const LearningParams& learn, Rng& rng, std::uint64_t round) {
  const int proposer = assign_proposer(scheme, round, rng);
  return play_round(agents, state, proposer, game, learn, rng, round);
}

TwoPlayerGame::TwoPlayerGame(const RunConfig& config) : config_(config), rng_(config.seed) {
  for (Agent& a : agents_) {
    a.proposer = init_qtable(rng_);
    a.responder = init_qtable(rng_);
  }
  state_ = SimState::from_index(static_cast<int>(rng_.below(kNumStates)));
}

RoundRecord TwoPlayerGame::step() {
  return fairq::step(agents_, state_, config_.scheme, config_.game, config_.learn, rng_, round_++);
}

std::vector<RoundRecord> run(const RunConfig& config) {
  std::vector<RoundRecord> out;
  out.reserve(config.steps);
  run(config, [&out](const RoundRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace fairq
