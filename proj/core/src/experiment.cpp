#include "fairq/experiment.hpp"

#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fairq/output.hpp"
#include "fairq/parallel.hpp"
#include "fairq/rng.hpp"
#include "fairq/theory.hpp"

#ifndef FAIRQ_VERSION
#define FAIRQ_VERSION "unknown"
#endif

namespace fairq {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kSeedRule =
    "seed = mix64(mix64(master) XOR ((grid_index << 32) | realization)), "
    "mix64 = SplitMix64 finalizer";

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string state_label(int index) { return "s" + std::to_string(index + 1); }

const char* const kLevelSuffix[] = {"l", "m", "h"};

// JSON numbers must be finite; NaN becomes null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fractions_json(const FractionPoint& f) {
  json j = json::object();
  for (int a = 0; a < kNumLevels; ++a) j[std::string("f_p") + kLevelSuffix[a]] = f.proposer[a];
  for (int a = 0; a < kNumLevels; ++a) j[std::string("f_q") + kLevelSuffix[a]] = f.responder[a];
  for (int s = 0; s < kNumStates; ++s) j[state_label(s)] = f.state[s];
  return j;
}

json stddev_json(std::span<const FractionPoint> points) {
  json j = json::object();
  auto column = [&](const std::string& name, auto&& get) {
    EnsembleAverage acc;
    for (const FractionPoint& p : points) acc.add(get(p));
    j[name] = acc.count() ? std::sqrt(acc.variance()) : 0.0;
  };
  for (int a = 0; a < kNumLevels; ++a) {
    column(std::string("f_p") + kLevelSuffix[a], [a](const FractionPoint& p) { return p.proposer[a]; });
  }
  for (int a = 0; a < kNumLevels; ++a) {
    column(std::string("f_q") + kLevelSuffix[a], [a](const FractionPoint& p) { return p.responder[a]; });
  }
  for (int s = 0; s < kNumStates; ++s) {
    column(state_label(s), [s](const FractionPoint& p) { return p.state[s]; });
  }
  return j;
}

class OutputSet {
 public:
  explicit OutputSet(const ExperimentSpec& spec) : spec_(spec) {}

  void write_csv(const std::string& name, const CsvWriter& csv) {
    const std::filesystem::path path = spec_.out / name;
    write_file_atomic(path, csv.text());
    files_.push_back(path);

    json meta;
    meta["file"] = name;
    meta["columns"] = csv.header();
    meta["rows"] = csv.rows();
    meta["mode"] = std::string(mode_name(spec_.mode));
    meta["settings"] = spec_.settings;
    meta["master_seed"] = spec_.master_seed();
    meta["rng"] = std::string(kRngAlgorithm);
    meta["seed_rule"] = std::string(kSeedRule);
    meta["version"] = FAIRQ_VERSION;
    std::filesystem::path meta_path = path;
    meta_path.replace_extension(".meta.json");
    write_file_atomic(meta_path, meta.dump(2) + "\n");
    files_.push_back(meta_path);
  }

  ExperimentResult finish(json summary) {
    summary["files"] = json::array();
    const std::filesystem::path summary_path = spec_.out / "summary.json";
    files_.push_back(summary_path);
    for (const auto& f : files_) summary["files"].push_back(f.filename().string());
    const std::string text = summary.dump(2) + "\n";
    write_file_atomic(summary_path, text);
    return {files_, text};
  }

 private:
  const ExperimentSpec& spec_;
  std::vector<std::filesystem::path> files_;
};

json base_summary(const ExperimentSpec& spec) {
  json s;
  s["mode"] = std::string(mode_name(spec.mode));
  s["version"] = FAIRQ_VERSION;
  s["rng"] = std::string(kRngAlgorithm);
  if (spec.mode != Mode::TheoryBoundary) {
    s["master_seed"] = spec.master_seed();
    s["ensemble"] = spec.ensemble;
  }
  return s;
}

void window_summary(json& s, const ExperimentSpec& spec, const EnsembleResult& result) {
  s["window"] = {{"start", spec.run.transient}, {"end", spec.run.transient + spec.run.window}};
  if (result.merged.window.rounds() == 0) return;
  json f = fractions_json(result.merged.window.fractions());
  f["deal_rate"] = number(result.merged.window.deals().deal_rate());
  s["fractions"] = f;
  s["realization_stddev"] = stddev_json(result.realizations);
}

CsvWriter time_series_csv(const TimeSeries& series, const GameParams& game) {
  CsvWriter csv(time_series_columns());
  const auto bins = series.bins();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const RoundCounts& b = bins[i];
    if (b.rounds() == 0) continue;
    const FractionPoint f = b.fractions();
    csv.cell(series.bin_start(i));
    for (double v : f.proposer) csv.cell(v);
    for (double v : f.responder) csv.cell(v);
    for (double v : f.state) csv.cell(v);
    const DealStats& d = b.deals();
    csv.cell(d.deal_rate());
    for (Role r : {Role::Proposer, Role::Responder}) {
      for (Level a : kAllLevels) csv.cell(d.mean_payoff(r, a, game));
    }
    for (Role r : {Role::Proposer, Role::Responder}) {
      for (Level a : kAllLevels) csv.cell(d.success_rate(r, a));
    }
    csv.end_row();
  }
  return csv;
}

CsvWriter preferences_csv(const std::vector<std::array<PreferenceStats, 2>>& snapshots,
                          std::uint64_t every) {
  CsvWriter csv(preferences_columns());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    for (Role role : {Role::Proposer, Role::Responder}) {
      const PreferenceStats& p = snapshots[i][static_cast<std::size_t>(index(role))];
      for (int s = 0; s < kNumStates; ++s) {
        const auto d = p.distribution(s);
        csv.cell(static_cast<std::uint64_t>(i) * every)
            .cell(state_label(s))
            .cell(role_name(role))
            .cell(d[0])
            .cell(d[1])
            .cell(d[2]);
        csv.end_row();
      }
    }
  }
  return csv;
}

ExperimentResult run_mode(const ExperimentSpec& spec) {
  OutputSet out(spec);
  json summary = base_summary(spec);
  const unsigned threads = resolve_threads(spec.threads);

  switch (spec.mode) {
    case Mode::Run: {
      ObservationPlan plan;
      plan.bin = spec.bin_width();
      plan.preference_every = spec.preference_every;
      const EnsembleResult r = run_ensemble(spec.run, spec.ensemble, spec.master_seed(), 0, plan, threads);
      out.write_csv("time_series.csv", time_series_csv(*r.merged.series, spec.run.game));
      out.write_csv("preferences.csv", preferences_csv(r.merged.preferences->unconditional, plan.preference_every));
      out.write_csv("preferences_conditional.csv",
                    preferences_csv(r.merged.preferences->conditional, plan.preference_every));
      window_summary(summary, spec, r);
      break;
    }
    case Mode::ScanLearning:
    case Mode::ScanGame: {
      const bool learning = spec.mode == Mode::ScanLearning;
      const auto& axis1 = learning ? spec.alpha_grid : spec.l_grid;
      const auto& axis2 = learning ? spec.gamma_grid : spec.h_grid;
      std::vector<RunConfig> configs;
      for (double a : axis1) {
        for (double b : axis2) {
          RunConfig c = spec.run;
          if (learning) {
            c.learn.alpha = a;
            c.learn.gamma = b;
          } else {
            c.game.l = a;
            c.game.h = b;
          }
          configs.push_back(c);
        }
      }
      const std::vector<RoundCounts> cells = run_grid(configs, spec.ensemble, spec.master_seed(), threads);
      CsvWriter csv(heatmap_columns());
      for (std::size_t g = 0; g < cells.size(); ++g) {
        const FractionPoint f = cells[g].fractions();
        csv.cell(axis1[g / axis2.size()]).cell(axis2[g % axis2.size()]);
        for (double v : f.proposer) csv.cell(v);
        for (double v : f.responder) csv.cell(v);
        for (double v : f.state) csv.cell(v);
        csv.end_row();
      }
      out.write_csv("heatmap.csv", csv);
      summary["axis1"] = learning ? "alpha" : "l";
      summary["axis2"] = learning ? "gamma" : "h";
      summary["cells"] = cells.size();
      summary["window"] = {{"start", spec.run.transient}, {"end", spec.run.transient + spec.run.window}};
      break;
    }
    case Mode::Transitions: {
      ObservationPlan plan;
      plan.windows = spec.windows;
      const EnsembleResult r = run_ensemble(spec.run, spec.ensemble, spec.master_seed(), 0, plan, threads);
      CsvWriter csv(transitions_columns());
      json networks = json::array();
      const WindowedTransitions& wt = *r.merged.transitions;
      for (std::size_t w = 0; w < wt.windows().size(); ++w) {
        const Window win = wt.windows()[w];
        const TransitionStats& stats = wt.stats()[w];
        const Matrix9 joint = joint_probabilities(stats);
        const Matrix9 flow = net_flow(joint);
        const Matrix9 cond = conditional_probabilities(stats);
        for (int i = 0; i < kNumStates; ++i) {
          for (int j = 0; j < kNumStates; ++j) {
            csv.cell(win.start).cell(win.end).cell(state_label(i)).cell(state_label(j));
            csv.cell(joint[i][j]).cell(cond[i][j]).cell(flow[i][j]);
            csv.end_row();
          }
        }
        const TransitionNetwork net = transition_network(stats, 0.05);
        json edges = json::array();
        for (const NetworkEdge& e : net.edges) {
          edges.push_back({{"from", state_label(e.from)}, {"to", state_label(e.to)}, {"p", e.probability}});
        }
        json occupancy = json::object();
        for (int s = 0; s < kNumStates; ++s) occupancy[state_label(s)] = net.occupancy[s];
        networks.push_back({{"window_start", win.start},
                            {"window_end", win.end},
                            {"threshold", 0.05},
                            {"occupancy", occupancy},
                            {"edges", edges}});
      }
      out.write_csv("transitions.csv", csv);
      summary["networks"] = networks;
      break;
    }
    case Mode::Lattice: {
      LatticeConfig lc;
      lc.n = spec.lattice_n;
      lc.game = spec.run.game;
      lc.learn = spec.run.learn;
      lc.steps = spec.run.steps;
      lc.transient = spec.run.transient;
      lc.window = spec.run.window;
      ObservationPlan plan;
      plan.bin = spec.bin_width();
      const EnsembleResult r = run_lattice_ensemble(lc, spec.ensemble, spec.master_seed(), plan, threads);
      out.write_csv("time_series.csv", time_series_csv(*r.merged.series, spec.run.game));
      summary["n"] = spec.lattice_n;
      window_summary(summary, spec, r);
      break;
    }
    case Mode::TheoryBoundary: {
      const auto curve = theory::boundary_curve(spec.run.game, spec.gamma_grid);
      CsvWriter csv(boundary_columns());
      json points = json::array();
      for (const auto& p : curve) {
        const double alpha = p.alpha.value_or(std::numeric_limits<double>::quiet_NaN());
        csv.cell(p.gamma).cell(alpha);
        csv.end_row();
        points.push_back({{"gamma", p.gamma}, {"alpha_boundary", number(alpha)}});
      }
      out.write_csv("boundary.csv", csv);
      summary["l"] = spec.run.game.l;
      summary["boundary"] = points;
      break;
    }
  }
  return out.finish(std::move(summary));
}

void observe_round(Observation& obs, const RunConfig& protocol, const RoundRecord& rec) {
  if (rec.round >= protocol.transient && rec.round < protocol.transient + protocol.window) {
    obs.window.add(rec);
  }
  if (obs.series) obs.series->add(rec);
  if (obs.transitions) obs.transitions->add(rec);
}

Observation prepare(const ObservationPlan& plan, std::uint64_t steps) {
  Observation obs;
  if (plan.bin != 0) obs.series.emplace(steps, plan.bin);
  if (!plan.windows.empty()) obs.transitions.emplace(plan.windows);
  if (plan.preference_every != 0) {
    const std::size_t snapshots = static_cast<std::size_t>(steps / plan.preference_every) + 1;
    obs.preferences.emplace();
    obs.preferences->unconditional.resize(snapshots);
    obs.preferences->conditional.resize(snapshots);
  }
  return obs;
}

void snapshot_preferences(PreferenceSeries& prefs, std::size_t i, const AgentPair& agents, SimState current) {
  for (Role role : {Role::Proposer, Role::Responder}) {
    const auto r = static_cast<std::size_t>(index(role));
    for (const Agent& a : agents) {
      prefs.unconditional[i][r].add_table(a.table(role));
      prefs.conditional[i][r].add_row(a.table(role), current);
    }
  }
}

template <typename Observe>
EnsembleResult run_realizations(int realizations, std::uint64_t master, std::uint64_t grid_index,
                                unsigned threads, Observe&& observe) {
  EnsembleResult result;
  result.realizations.resize(static_cast<std::size_t>(realizations));
  std::mutex mu;
  bool first = true;
  parallel_for(static_cast<std::size_t>(realizations), threads, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(master, grid_index, k);
    Observation obs;
    try {
      obs = observe(seed);
    } catch (const std::exception& e) {
      throw RealizationError(grid_index, k, seed, e.what());
    }
    FractionPoint f;
    if (obs.window.rounds() != 0) f = obs.window.fractions();
    std::lock_guard lock(mu);
    result.realizations[k] = f;
    if (first) {
      result.merged = std::move(obs);
      first = false;
    } else {
      result.merged.merge(obs);
    }
  });
  return result;
}

}  // namespace

RealizationError::RealizationError(std::uint64_t grid_index, std::uint64_t realization, std::uint64_t seed,
                                   const std::string& what)
    : std::runtime_error("realization " + std::to_string(realization) + " of grid point " +
                         std::to_string(grid_index) + " (seed " + hex64(seed) + ") failed: " + what),
      seed_(seed) {}

void PreferenceSeries::merge(const PreferenceSeries& other) {
  if (other.unconditional.size() != unconditional.size()) {
    throw std::invalid_argument("cannot merge preference series of different length");
  }
  for (std::size_t i = 0; i < unconditional.size(); ++i) {
    for (std::size_t r = 0; r < 2; ++r) {
      unconditional[i][r].merge(other.unconditional[i][r]);
      conditional[i][r].merge(other.conditional[i][r]);
    }
  }
}

void Observation::merge(const Observation& other) {
  window.merge(other.window);
  if (series && other.series) series->merge(*other.series);
  if (transitions && other.transitions) transitions->merge(*other.transitions);
  if (preferences && other.preferences) preferences->merge(*other.preferences);
}

Observation observe_two_player(const RunConfig& config, const ObservationPlan& plan) {
  config.validate();
  Observation obs = prepare(plan, config.steps);
  TwoPlayerGame game(config);
  const std::uint64_t every = plan.preference_every;
  for (std::uint64_t t = 0; t < config.steps; ++t) {
    if (every != 0 && t % every == 0) {
      snapshot_preferences(*obs.preferences, static_cast<std::size_t>(t / every), game.agents(), game.state());
    }
    observe_round(obs, config, game.step());
  }
  if (every != 0 && config.steps % every == 0) {
    snapshot_preferences(*obs.preferences, static_cast<std::size_t>(config.steps / every), game.agents(),
                         game.state());
  }
  return obs;
}

Observation observe_lattice(const LatticeConfig& config, const ObservationPlan& plan) {
  config.validate();
  if (plan.preference_every != 0) {
    throw InvalidParameter("preference snapshots are not recorded for lattice runs");
  }
  Observation obs = prepare(plan, config.steps);
  const RunConfig protocol{config.game, config.learn, RoleScheme::Rotating, config.steps, config.transient,
                           config.window, config.seed};
  LatticeGame game(config);
  for (std::uint64_t t = 0; t < config.steps; ++t) {
    for (const RoundRecord& rec : game.step()) observe_round(obs, protocol, rec);
  }
  return obs;
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

EnsembleResult run_ensemble(const RunConfig& config, int realizations, std::uint64_t master,
                            std::uint64_t grid_index, const ObservationPlan& plan, unsigned threads) {
  if (realizations < 1) throw InvalidParameter("ensemble size must be >= 1");
  config.validate();
  return run_realizations(realizations, master, grid_index, resolve_threads(threads),
                          [&](std::uint64_t seed) {
                            RunConfig c = config;
                            c.seed = seed;
                            return observe_two_player(c, plan);
                          });
}

EnsembleResult run_lattice_ensemble(const LatticeConfig& config, int realizations, std::uint64_t master,
                                    const ObservationPlan& plan, unsigned threads) {
  if (realizations < 1) throw InvalidParameter("ensemble size must be >= 1");
  config.validate();
  return run_realizations(realizations, master, 0, resolve_threads(threads), [&](std::uint64_t seed) {
    LatticeConfig c = config;
    c.seed = seed;
    return observe_lattice(c, plan);
  });
}

std::vector<RoundCounts> run_grid(const std::vector<RunConfig>& configs, int realizations,
                                  std::uint64_t master, unsigned threads) {
  if (realizations < 1) throw InvalidParameter("ensemble size must be >= 1");
  for (const RunConfig& c : configs) c.validate();
  const std::size_t m = static_cast<std::size_t>(realizations);
  std::vector<RoundCounts> cells(configs.size());
  std::mutex mu;
  parallel_for(configs.size() * m, resolve_threads(threads), [&](std::size_t item) {
    const std::size_t g = item / m;
    const std::size_t k = item % m;
    RunConfig c = configs[g];
    c.seed = derive_seed(master, g, k);
    Observation obs;
    try {
      obs = observe_two_player(c, ObservationPlan{});
    } catch (const std::exception& e) {
      throw RealizationError(g, k, c.seed, e.what());
    }
    std::lock_guard lock(mu);
    cells[g].merge(obs.window);
  });
  return cells;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) { return run_mode(spec); }

std::vector<std::string> time_series_columns() {
  std::vector<std::string> c{"round", "f_pl", "f_pm", "f_ph", "f_ql", "f_qm", "f_qh"};
  for (int s = 0; s < kNumStates; ++s) c.push_back(state_label(s));
  c.push_back("deal_rate");
  for (const char* prefix : {"pay_p_", "pay_q_", "succ_p_", "succ_q_"}) {
    for (const char* lv : kLevelSuffix) c.push_back(std::string(prefix) + lv);
  }
  return c;
}

std::vector<std::string> heatmap_columns() {
  std::vector<std::string> c{"axis1", "axis2", "f_pl", "f_pm", "f_ph", "f_ql", "f_qm", "f_qh"};
  for (int s = 0; s < kNumStates; ++s) c.push_back(state_label(s));
  return c;
}

std::vector<std::string> transitions_columns() {
  return {"window_start", "window_end", "from_state", "to_state", "joint_p", "cond_p", "net_flow"};
}

std::vector<std::string> preferences_columns() {
  return {"round", "state", "role", "mass_l", "mass_m", "mass_h"};
}

std::vector<std::string> boundary_columns() { return {"gamma", "alpha_boundary"}; }

}  // namespace fairq
