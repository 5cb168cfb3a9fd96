// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are pinned
// below; the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../support/properties.hpp"
#include "fairq/experiment.hpp"
#include "fairq/theory.hpp"

using namespace fairq;

namespace {

constexpr std::uint64_t kMaster = 2025;
constexpr std::uint64_t kTransient = 2'000'000;
constexpr std::uint64_t kWindow = 1'000;

// Pinned tolerances.
constexpr double kFairCornerMin = 0.65;
constexpr double kRationalMin = 0.8;
constexpr double kOvergenerousMax = 0.05;
constexpr double kTrendNoise = 0.1;
constexpr double kFairAt025 = 0.8;
constexpr double kFairAt025Tol = 0.15;
constexpr double kRoughlyEqualTol = 0.15;
constexpr double kHInsensitiveMax = 0.1;
constexpr double kRejection = 0.8;
constexpr double kRejectionTol = 0.15;
constexpr double kExtinctMax = 0.05;
constexpr std::uint64_t kExtinctAfter = 100'000;
constexpr double kLateDiagonalMin = 0.9;
constexpr double kNetworkMin = 0.7;
constexpr double kRationalOccupancyMin = 0.8;
constexpr double kS1ToS4 = 0.47;
constexpr double kS1ToS4Tol = 0.1;
constexpr double kSurvivalMin = 0.05;
constexpr double kSpreadMin = 0.1;
constexpr double kTheoryIterTol = 1e-9;
constexpr double kBoundaryExactTol = 1e-15;
constexpr double kBalanceTol = 1e-12;
constexpr double kBoundaryFlipTol = 0.15;
constexpr double kBoundaryScanStep = 0.05;
constexpr int kBoundaryRealizations = 20;
constexpr double kLatticeFairMin = 0.7;
constexpr double kLatticeGenerousMax = 0.05;

unsigned g_threads = 0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

RunConfig base(double alpha, double gamma, double l = 0.3, double h = 0.8,
               RoleScheme scheme = RoleScheme::Rotating, double epsilon = 0.01) {
  RunConfig c;
  c.game = {l, 0.5, h};
  c.learn = {alpha, gamma, epsilon};
  c.scheme = scheme;
  c.transient = kTransient;
  c.window = kWindow;
  c.steps = kTransient + kWindow;
  return c;
}

std::string key(const RunConfig& c, int m) {
  std::ostringstream s;
  s.precision(17);
  s << c.learn.alpha << ' ' << c.learn.gamma << ' ' << c.learn.epsilon << ' ' << c.game.l << ' ' << c.game.h
    << ' ' << static_cast<int>(c.scheme) << ' ' << c.steps << ' ' << c.transient << ' ' << c.window << ' ' << m;
  return s.str();
}

// Window fractions, memoized so criteria sharing a configuration share the
// run.
FractionPoint steady(const RunConfig& c, int m) {
  static std::map<std::string, FractionPoint> cache;
  const std::string k = key(c, m);
  if (auto it = cache.find(k); it != cache.end()) return it->second;
  const FractionPoint f = run_ensemble(c, m, kMaster, 0, ObservationPlan{}, g_threads).merged.window.fractions();
  cache.emplace(k, f);
  return f;
}

TransitionStats window_transitions(const RunConfig& c, int m) {
  ObservationPlan plan;
  plan.windows = {{c.transient, c.transient + c.window}};
  return run_ensemble(c, m, kMaster, 0, plan, g_threads).merged.transitions->stats()[0];
}

constexpr int L = 0, M = 1, H = 2;

Outcome fair_corner() {
  Outcome o;
  const FractionPoint f = steady(base(0.1, 0.9), 100);
  o.require(f.proposer[M] >= kFairCornerMin, "f_pm=" + fmt(f.proposer[M]) + ">=" + fmt(kFairCornerMin));
  o.require(f.responder[M] >= kFairCornerMin, "f_qm=" + fmt(f.responder[M]) + ">=" + fmt(kFairCornerMin));
  const bool dominant = f.proposer[M] > f.proposer[L] && f.proposer[M] > f.proposer[H] &&
                        f.responder[M] > f.responder[L] && f.responder[M] > f.responder[H];
  o.require(dominant, "m dominant (f_pl=" + fmt(f.proposer[L]) + " f_ql=" + fmt(f.responder[L]) + ")");
  return o;
}

Outcome rational_regime() {
  Outcome o;
  for (double alpha : {0.1, 0.9}) {
    const FractionPoint f = steady(base(alpha, 0.1), 100);
    const std::string at = "(" + fmt(alpha) + ",0.1) ";
    o.require(f.proposer[L] >= kRationalMin, at + "f_pl=" + fmt(f.proposer[L]));
    o.require(f.responder[L] >= kRationalMin, at + "f_ql=" + fmt(f.responder[L]));
  }
  return o;
}

Outcome overgenerous() {
  Outcome o;
  double worst_p = 0.0, worst_q = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double l = 0.1 + 0.35 * i / 4.0;
      const double h = 0.55 + 0.35 * j / 4.0;
      const FractionPoint f = steady(base(0.1, 0.9, l, h), 50);
      worst_p = std::max(worst_p, f.proposer[H]);
      worst_q = std::max(worst_q, f.responder[H]);
    }
  }
  o.require(worst_p < kOvergenerousMax, "max f_ph=" + fmt(worst_p));
  o.require(worst_q < kOvergenerousMax, "max f_qh=" + fmt(worst_q));
  return o;
}

Outcome l_trend(RoleScheme scheme) {
  Outcome o;
  const FractionPoint f10 = steady(base(0.1, 0.9, 0.1, 0.8, scheme), 100);
  const FractionPoint f25 = steady(base(0.1, 0.9, 0.25, 0.8, scheme), 100);
  const FractionPoint f45 = steady(base(0.1, 0.9, 0.45, 0.8, scheme), 100);
  o.require(f10.proposer[M] + kTrendNoise >= f25.proposer[M] && f25.proposer[M] + kTrendNoise >= f45.proposer[M],
            "f_pm(l=.1,.25,.45)=" + fmt(f10.proposer[M]) + "," + fmt(f25.proposer[M]) + "," + fmt(f45.proposer[M]));
  o.require(std::abs(f25.proposer[M] - kFairAt025) <= kFairAt025Tol &&
                std::abs(f25.responder[M] - kFairAt025) <= kFairAt025Tol,
            "l=.25 f_pm=" + fmt(f25.proposer[M]) + " f_qm=" + fmt(f25.responder[M]));
  o.require(std::abs(f45.proposer[M] - f45.proposer[L]) <= kRoughlyEqualTol &&
                std::abs(f45.responder[M] - f45.responder[L]) <= kRoughlyEqualTol,
            "l=.45 f_pm/f_pl=" + fmt(f45.proposer[M]) + "/" + fmt(f45.proposer[L]) + " f_qm/f_ql=" +
                fmt(f45.responder[M]) + "/" + fmt(f45.responder[L]));

  std::array<double, 6> lo, hi;
  lo.fill(1.0);
  hi.fill(0.0);
  for (double h : {0.65, 0.8, 0.9}) {
    const FractionPoint f = steady(base(0.1, 0.9, 0.3, h, scheme), 100);
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], f.proposer[a]);
      hi[a] = std::max(hi[a], f.proposer[a]);
      lo[3 + a] = std::min(lo[3 + a], f.responder[a]);
      hi[3 + a] = std::max(hi[3 + a], f.responder[a]);
    }
  }
  double spread = 0.0;
  for (int k = 0; k < 6; ++k) spread = std::max(spread, hi[k] - lo[k]);
  o.require(spread < kHInsensitiveMax, "max h-spread at l=.3 " + fmt(spread));
  return o;
}

Outcome low_offer_rejection() {
  Outcome o;
  const FractionPoint f = steady(base(0.1, 0.9, 0.15), 100);
  const double reject = f.responder[M] + f.responder[H];
  o.require(std::abs(reject - kRejection) <= kRejectionTol, "f_qm+f_qh=" + fmt(reject));
  return o;
}

Outcome phase_structure() {
  Outcome o;
  RunConfig c = base(0.1, 0.9);
  ObservationPlan plan;
  plan.bin = 10'000;
  const Window mid{90'000, 2'000'000};
  const Window late{kTransient, kTransient + kWindow};
  plan.windows = {mid, late};
  const EnsembleResult r = run_ensemble(c, 100, kMaster, 0, plan, g_threads);

  double worst = 0.0;
  int worst_state = 0;
  std::uint64_t worst_round = 0;
  const auto bins = r.merged.series->bins();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (r.merged.series->bin_start(i) < kExtinctAfter || bins[i].rounds() == 0) continue;
    const FractionPoint f = bins[i].fractions();
    for (int s : {1, 2, 5, 6, 7, 8}) {
      if (f.state[s] > worst) {
        worst = f.state[s];
        worst_state = s + 1;
        worst_round = r.merged.series->bin_start(i);
      }
    }
  }
  o.require(worst < kExtinctMax, "max f_s{2,3,6,7,8,9} after 1e5=" + fmt(worst) + " (s" +
                                     std::to_string(worst_state) + " @" + std::to_string(worst_round) + ")");

  const Matrix9 lp = joint_probabilities(r.merged.transitions->stats()[1]);
  const double diag = lp[4][4] + lp[0][0];
  o.require(diag >= kLateDiagonalMin, "late P(5,5)+P(1,1)=" + fmt(diag));

  const Matrix9 d = net_flow(joint_probabilities(r.merged.transitions->stats()[0]));
  const double d41 = d[3][0], d15 = d[0][4], d54 = d[4][3];
  o.require(d41 > 0 && d15 > 0 && d54 > 0, "mid dP(4>1,1>5,5>4)=" + sci(d41) + "," + sci(d15) + "," + sci(d54));
  o.require(d54 < d41 && d54 < d15, "dP(5>4) weakest");
  return o;
}

Outcome transition_networks() {
  Outcome o;
  constexpr double eps = 0.1;
  {
    const Matrix9 p = conditional_probabilities(window_transitions(base(0.1, 0.9, 0.3, 0.8, RoleScheme::Rotating, eps), 100));
    std::string vals;
    bool ok = true;
    for (auto [from, to] : {std::pair{2, 5}, {6, 5}, {8, 5}, {3, 1}, {7, 1}}) {
      const double v = p[from - 1][to - 1];
      ok = ok && v > kNetworkMin;
      vals += " " + std::to_string(from) + ">" + std::to_string(to) + "=" + fmt(v);
    }
    o.require(ok, "(0.1,0.9)" + vals);
  }
  {
    const TransitionNetwork n =
        transition_network(window_transitions(base(0.1, 0.1, 0.3, 0.8, RoleScheme::Rotating, eps), 100), 0.05);
    o.require(n.occupancy[0] > kRationalOccupancyMin, "(0.1,0.1) p(s1)=" + fmt(n.occupancy[0]));
  }
  {
    const TransitionStats t = window_transitions(base(0.9, 0.9, 0.3, 0.8, RoleScheme::Rotating, eps), 100);
    const double p14 = conditional_probabilities(t)[0][3];
    const double s4 = transition_network(t, 0.05).occupancy[3];
    o.require(std::abs(p14 - kS1ToS4) <= kS1ToS4Tol, "(0.9,0.9) p(1>4)=" + fmt(p14));
    o.require(s4 > kSurvivalMin, "p(s4)=" + fmt(s4));
  }
  {
    const TransitionNetwork n =
        transition_network(window_transitions(base(0.9, 0.1, 0.3, 0.8, RoleScheme::Rotating, eps), 100), 0.05);
    o.require(n.occupancy[0] > kSpreadMin && n.occupancy[3] > kSpreadMin && n.occupancy[6] > kSpreadMin,
              "(0.9,0.1) p(s1,s4,s7)=" + fmt(n.occupancy[0]) + "," + fmt(n.occupancy[3]) + "," +
                  fmt(n.occupancy[6]));
  }
  return o;
}

Outcome theory_oracle() {
  using testing::iterate_feed_forward;
  using testing::iterate_self_loop;
  Outcome o;
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> ul(0.01, 0.49), ug(0.0, 0.95), ua(0.2, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const GameParams g{ul(gen), 0.5, 0.8};
    const double gamma = ug(gen);
    const double alpha = ua(gen);
    const auto fp = theory::fixed_points(g, gamma);
    worst = std::max({worst, std::abs(fp.s5_mid - iterate_self_loop(0.5, gamma, alpha)),
                      std::abs(fp.s1_low - iterate_self_loop(1.0 - g.l, gamma, alpha)),
                      std::abs(fp.s1_mid - iterate_feed_forward(0.5, gamma, alpha, 0.5)),
                      std::abs(fp.s2_mid - iterate_feed_forward(0.5, gamma, alpha, 0.5))});
  }
  o.require(worst <= kTheoryIterTol, "fixed points vs iteration max err " + sci(worst));

  const double b = *theory::boundary_alpha({0.3, 0.5, 0.8}, 0.9);
  o.require(std::abs(b - 0.8) <= kBoundaryExactTol, "|boundary(0.3,0.9)-0.8|=" + sci(std::abs(b - 0.8)));

  double worst_res = 0.0;
  std::uniform_real_distribution<double> ua01(0.0, 1.0), ug99(0.0, 0.99);
  for (int k = 0; k < 100; ++k) {
    const GameParams g{ul(gen), 0.5, 0.8};
    const double gamma = ug99(gen);
    const double alpha = *theory::boundary_alpha(g, gamma);
    worst_res = std::max(worst_res, std::abs(theory::balance_residual(g, gamma, alpha)));
  }
  o.require(worst_res <= kBalanceTol, "balance residual max " + sci(worst_res));

  // Simulated flip: the lowest alpha on the scan grid at which s4 survives.
  for (double gamma : {0.3, 0.6}) {
    const double predicted = *theory::boundary_alpha({0.3, 0.5, 0.8}, gamma);
    double found = std::nan("");
    std::string profile;
    for (int i = 1; i * kBoundaryScanStep <= 1.0 + 1e-12; ++i) {
      const double alpha = i * kBoundaryScanStep;
      const FractionPoint f = steady(base(alpha, gamma, 0.3, 0.8, RoleScheme::Rotating, 0.1), kBoundaryRealizations);
      profile += (profile.empty() ? "" : ",") + fmt(f.state[3]);
      if (std::isnan(found) && f.state[3] > kSurvivalMin) found = alpha;
    }
    o.require(!std::isnan(found) && std::abs(found - predicted) <= kBoundaryFlipTol,
              "gamma=" + fmt(gamma) + " s4 survives from alpha=" + fmt(found) + " vs " + fmt(predicted) +
                  " [f_s4 " + profile + "]");
  }
  return o;
}

Outcome role_schemes() {
  Outcome o;
  for (RoleScheme s : {RoleScheme::Random, RoleScheme::Fixed}) {
    const Outcome r = l_trend(s);
    o.require(r.pass, std::string(scheme_name(s)) + ": " + r.detail);
  }
  return o;
}

Outcome lattice() {
  Outcome o;
  LatticeConfig c;
  c.n = 50;
  c.k = 2;
  c.game = {0.3, 0.5, 0.8};
  c.learn = {0.1, 0.9, 0.01};
  c.transient = 1'000'000;
  c.window = kWindow;
  c.steps = c.transient + c.window;
  const FractionPoint f = run_lattice_ensemble(c, 50, kMaster, ObservationPlan{}, g_threads).merged.window.fractions();
  const double fair = 0.5 * (f.proposer[M] + f.responder[M]);
  const double generous = f.proposer[H] + f.responder[H];
  o.require(fair > kLatticeFairMin, "fair=" + fmt(fair) + " (f_pm=" + fmt(f.proposer[M]) + " f_qm=" +
                                        fmt(f.responder[M]) + ")");
  o.require(generous < kLatticeGenerousMax, "f_ph+f_qh=" + fmt(generous));
  return o;
}

Outcome property_suite() {
  using namespace testing;
  Outcome o;
  const std::pair<const char*, CheckResult (*)()> checks[] = {
      {"payoff-conservation", payoff_conservation},
      {"q-update-convexity", q_update_convexity},
      {"fixed-point-convergence", fixed_point_convergence},
      {"merge-law", merge_law},
      {"net-flow-antisymmetry", net_flow_antisymmetry},
      {"conditional-rows", conditional_rows_normalized},
      {"brute-force-oracle", brute_force_metrics},
      {"seed-determinism", seed_determinism},
  };
  for (const auto& [name, fn] : checks) {
    const CheckResult r = fn();
    o.require(r.ok, std::string(name) + (r.ok ? "" : " (" + r.detail + ")"));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string filter;
  app.add_option("--filter", filter, "run only criteria whose name contains this text");
  app.add_option("--threads", g_threads, "worker threads, 0 for all cores");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"property-suite", property_suite},
      {"theory-oracle", theory_oracle},
      {"fair-corner", fair_corner},
      {"rational-regime", rational_regime},
      {"overgenerous-extinction", overgenerous},
      {"l-trend-h-insensitivity", [] { return l_trend(RoleScheme::Rotating); }},
      {"low-offer-rejection", low_offer_rejection},
      {"phase-structure", phase_structure},
      {"transition-networks", transition_networks},
      {"role-scheme-robustness", role_schemes},
      {"lattice", lattice},
  };

  int failed = 0;
  int ran = 0;
  for (const auto& [name, fn] : criteria) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++ran;
    if (!out.pass) ++failed;
    std::printf("%s %-26s %s [%.0fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
