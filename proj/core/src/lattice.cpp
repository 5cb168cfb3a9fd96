#include "fairq/lattice.hpp"

#include <stdexcept>
#include <string>

namespace fairq {

void LatticeConfig::validate() const {
  if (n < 3) throw InvalidParameter("lattice size n must be >= 3, got " + std::to_string(n));
  if (k != 2) throw InvalidParameter("only k = 2 nearest neighbours is supported");
  RunConfig as_run{game, learn, RoleScheme::Rotating, steps, transient, window, seed};
  as_run.validate();
}

LatticePopulation::LatticePopulation(int n, Rng& rng) : n_(n) {
  if (n < 3) throw InvalidParameter("lattice size n must be >= 3, got " + std::to_string(n));
  edges_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    EdgeContext& e = edges_[static_cast<std::size_t>(i)];
    const int j = (i + 1) % n;
    e.low = i < j ? i : j;
    e.high = i < j ? j : i;
    for (Agent& a : e.tables) {
      a.proposer = init_qtable(rng);
      a.responder = init_qtable(rng);
    }
    e.state = SimState::from_index(static_cast<int>(rng.below(kNumStates)));
  }
}

std::array<int, 2> LatticePopulation::incident_edges(int agent) const noexcept {
  return {(agent - 1 + n_) % n_, agent};
}

void lattice_step(LatticePopulation& population, const GameParams& game,
                  const LearningParams& learn, Rng& rng, std::uint64_t round,
                  std::span<RoundRecord> out) {
  auto edges = population.edges();
  const int proposer_endpoint = static_cast<int>(round % 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EdgeContext& e = edges[i];
    RoundRecord rec = play_round(e.tables, e.state, proposer_endpoint, game, learn, rng, round);
    // Report global agent ids rather than endpoint slots.
    rec.proposer_id = proposer_endpoint == 0 ? e.low : e.high;
    rec.responder_id = proposer_endpoint == 0 ? e.high : e.low;
    out[i] = rec;
  }
}

std::vector<RoundRecord> lattice_step(LatticePopulation& population, const GameParams& game,
                                      const LearningParams& learn, Rng& rng, std::uint64_t round) {
  std::vector<RoundRecord> out(population.edges().size());
  lattice_step(population, game, learn, rng, round, out);
  return out;
}

OptionFractions lattice_fractions(std::span<const RoundRecord> records) {
  OptionFractions f;
  if (records.empty()) return f;
  std::array<int, kNumLevels> p{}, q{};
  for (const RoundRecord& r : records) {
    ++p[static_cast<std::size_t>(index(r.proposer_action))];
    ++q[static_cast<std::size_t>(index(r.responder_action))];
  }
  const double n = static_cast<double>(records.size());
  for (std::size_t a = 0; a < kNumLevels; ++a) {
    f.proposer[a] = p[a] / n;
    f.responder[a] = q[a] / n;
  }
  return f;
}

LatticeGame::LatticeGame(const LatticeConfig& config)
    : config_(config), rng_(config.seed), population_(config.n, rng_),
      buffer_(static_cast<std::size_t>(config.n)) {}

std::span<const RoundRecord> LatticeGame::step() {
  lattice_step(population_, config_.game, config_.learn, rng_, round_++, buffer_);
  return buffer_;
}

}  // namespace fairq
