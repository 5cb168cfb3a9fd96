#include "fairq/theory.hpp"

#include <sstream>
#include <string>

namespace fairq::theory {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "gamma must lie in [0,1), got " << gamma;
    throw InvalidParameter(os.str());
  }
}

}  // namespace

PathwayPayoffs pathway_payoffs(const GameParams& game) noexcept {
  return {
      payoff(Role::Proposer, Level::L, Level::L, game),
      payoff(Role::Proposer, Level::M, Level::M, game),
      payoff(Role::Proposer, Level::L, Level::M, game),
  };
}

FixedPointReport fixed_points(const GameParams& game, double gamma) {
  check_gamma(gamma);
  const PathwayPayoffs pi = pathway_payoffs(game);
  FixedPointReport r;
  r.game = game;
  r.gamma = gamma;
  r.s5_mid = pi.mid_mid / (1.0 - gamma);
  r.s1_mid = gamma * pi.mid_mid / (1.0 - gamma) + pi.mid_mid;
  r.s2_mid = r.s1_mid;
  r.s1_low = pi.low_low / (1.0 - gamma);
  return r;
}

std::optional<double> boundary_alpha(const GameParams& game, double gamma) {
  if (!(game.l < game.m)) {
    std::ostringstream os;
    os << "boundary requires l < 0.5, got " << game.l;
    throw InvalidParameter(os.str());
  }
  check_gamma(gamma);
  const PathwayPayoffs pi = pathway_payoffs(game);
  const double alpha = (pi.low_low - pi.mid_mid) / (pi.low_low - gamma * pi.mid_mid);
  if (!(alpha > 0.0 && alpha <= 1.0)) return std::nullopt;
  return alpha;
}

double balance_residual(const GameParams& game, double gamma, double alpha) {
  const FixedPointReport q = fixed_points(game, gamma);
  const PathwayPayoffs pi = pathway_payoffs(game);
  return (1.0 - alpha) * q.s1_low + alpha * (gamma * q.s2_mid + pi.low_mid) - q.s1_mid;
}

std::vector<BoundaryPoint> boundary_curve(const GameParams& game, std::span<const double> gamma_grid) {
  std::vector<BoundaryPoint> curve;
  curve.reserve(gamma_grid.size());
  for (double g : gamma_grid) curve.push_back({g, boundary_alpha(game, g)});
  return curve;
}

}  // namespace fairq::theory
