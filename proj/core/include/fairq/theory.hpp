#pragma once

// Closed-form proposer fixed points along the self-loop and feed-forward
// pathways, and the learning-rate boundary above which a proposer sitting in
// the rational state abandons it after a single failed probe.

#include <optional>
#include <span>
#include <vector>

#include "fairq/game.hpp"

namespace fairq::theory {

// Proposer payoffs on the relevant joint actions.
struct PathwayPayoffs {
  double low_low;   // (p_l, q_l): 1 - l
  double mid_mid;   // (p_m, q_m): 1/2
  double low_mid;   // (p_l, q_m): failed deal, 0
};

PathwayPayoffs pathway_payoffs(const GameParams& game) noexcept;

struct FixedPointReport {
  GameParams game;
  double gamma = 0.0;
  double s5_mid = 0.0;  // Q*(s5, p_m): self-loop on the fair state
  double s1_mid = 0.0;  // Q*(s1, p_m): one step s1 -> s5, then the self-loop
  double s1_low = 0.0;  // Q*(s1, p_l): self-loop on the rational state
  double s2_mid = 0.0;  // Q*(s2, p_m): one step s2 -> s5, then the self-loop
};

// Throws InvalidParameter unless 0 <= gamma < 1.
FixedPointReport fixed_points(const GameParams& game, double gamma);

// alpha = (pi_ll - pi_mm) / (pi_ll - gamma pi_mm). Returns nullopt when the
// value falls outside (0, 1]. Throws InvalidParameter for l >= 0.5 or gamma
// outside [0, 1).
std::optional<double> boundary_alpha(const GameParams& game, double gamma);

// Residual of the balance condition
//   (1 - alpha) Q*(s1,p_l) + alpha (gamma Q*(s2,p_m) + pi_lm) - Q*(s1,p_m),
// which vanishes at alpha = boundary_alpha.
double balance_residual(const GameParams& game, double gamma, double alpha);

struct BoundaryPoint {
  double gamma = 0.0;
  std::optional<double> alpha;
};

std::vector<BoundaryPoint> boundary_curve(const GameParams& game, std::span<const double> gamma_grid);

}  // namespace fairq::theory
