#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fairq/game.hpp"
#include "fairq/rng.hpp"
#include "fairq/two_player.hpp"

namespace fairq {

struct LatticeConfig {
  int n = 50;
  int k = 2;
  GameParams game;
  LearningParams learn;
  std::uint64_t steps = 1'001'000;
  std::uint64_t transient = 1'000'000;
  std::uint64_t window = 1'000;
  std::uint64_t seed = 0;

  // n >= 3, k == 2, plus the RunConfig step-window rules.
  void validate() const;
};

// Edge i joins agents i and (i + 1) mod n. Each endpoint keeps a dedicated
// proposer/responder table pair for this edge, and the edge carries its own
// joint-action state.
struct EdgeContext {
  int low = 0;   // smaller agent index; proposes on even rounds
  int high = 1;
  SimState state;
  AgentPair tables;  // tables[0] belongs to `low`, tables[1] to `high`

  // Tables index into `tables` by endpoint; 0 for low, 1 for high.
  int endpoint_of(int agent) const noexcept { return agent == low ? 0 : 1; }
};

class LatticePopulation {
 public:
  // Ring of n agents with tables uniform on (0,1) and states uniform over
  // the nine states. Edges are initialized in index order from `rng`.
  LatticePopulation(int n, Rng& rng);

  int size() const noexcept { return n_; }
  std::span<const EdgeContext> edges() const noexcept { return edges_; }
  std::span<EdgeContext> edges() noexcept { return edges_; }

  // Indices of the two edges incident to `agent`.
  std::array<int, 2> incident_edges(int agent) const noexcept;

  // Every (agent, edge, role) table; 4n in total.
  std::size_t table_count() const noexcept { return edges_.size() * 4; }

 private:
  int n_;
  std::vector<EdgeContext> edges_;
};

// Plays one round on every edge in ascending edge index. On each edge the
// lower-indexed endpoint proposes on even rounds.
std::vector<RoundRecord> lattice_step(LatticePopulation& population, const GameParams& game,
                                      const LearningParams& learn, Rng& rng, std::uint64_t round);

// Same as lattice_step, writing into a caller-owned buffer of size n.
void lattice_step(LatticePopulation& population, const GameParams& game,
                  const LearningParams& learn, Rng& rng, std::uint64_t round,
                  std::span<RoundRecord> out);

struct OptionFractions {
  std::array<double, kNumLevels> proposer{};
  std::array<double, kNumLevels> responder{};
};

// Fractions over role instances in one step: one proposer and one responder
// per edge.
OptionFractions lattice_fractions(std::span<const RoundRecord> records);

class LatticeGame {
 public:
  explicit LatticeGame(const LatticeConfig& config);

  std::span<const RoundRecord> step();

  const LatticePopulation& population() const noexcept { return population_; }
  std::uint64_t round() const noexcept { return round_; }

 private:
  LatticeConfig config_;
  Rng rng_;
  LatticePopulation population_;
  std::vector<RoundRecord> buffer_;
  std::uint64_t round_ = 0;
};

}  // namespace fairq
