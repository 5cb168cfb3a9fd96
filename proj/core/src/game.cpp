#include "fairq/game.hpp"

#include <cmath>
#include <sstream>

namespace fairq {

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

char level_char(Level a) noexcept {
  switch (a) {
    case Level::L: return 'l';
    case Level::M: return 'm';
    case Level::H: return 'h';
  }
  return '?';
}

std::string_view role_name(Role r) noexcept {
  return r == Role::Proposer ? "proposer" : "responder";
}

void GameParams::validate() const {
  if (!(m == 0.5)) {
    throw InvalidParameter("m must be 0.5, got " + format_value(m));
  }
  if (!(l > 0.0 && l < m)) {
    throw InvalidParameter("l must satisfy 0 < l < 0.5, got " + format_value(l));
  }
  if (!(h > m && h < 1.0)) {
    throw InvalidParameter("h must satisfy 0.5 < h < 1, got " + format_value(h));
  }
}

void LearningParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidParameter("alpha must lie in (0,1], got " + format_value(alpha));
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidParameter("gamma must lie in [0,1), got " + format_value(gamma));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidParameter("epsilon must lie in [0,1], got " + format_value(epsilon));
  }
}

QTable init_qtable(Rng& rng) {
  QTable table;
  for (double& v : table.values()) v = rng.uniform_open();
  return table;
}

}  // namespace fairq
