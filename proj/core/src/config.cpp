#include "fairq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fairq {

namespace {

struct KeyInfo {
  std::string_view key;
  std::string_view default_value;
};

// Shared by every simulation mode.
constexpr KeyInfo kSimulationKeys[] = {
    {"alpha", "0.1"},   {"gamma", "0.9"},      {"epsilon", "0.01"}, {"l", "0.3"},
    {"h", "0.8"},       {"steps", ""},         {"transient", "2000000"},
    {"window", "1000"}, {"seed", "0"},         {"ensemble", "100"}, {"out", "."},
    {"threads", "0"},   {"bin", "0"},
};

constexpr KeyInfo kSchemeKey{"scheme", "rotating"};

std::vector<KeyInfo> key_table(Mode mode) {
  std::vector<KeyInfo> keys;
  if (mode == Mode::TheoryBoundary) {
    return {{"l", "0.3"}, {"h", "0.8"}, {"gamma-grid", "0:0.95:20"}, {"out", "."}};
  }
  keys.assign(std::begin(kSimulationKeys), std::end(kSimulationKeys));
  switch (mode) {
    case Mode::Run:
      keys.push_back(kSchemeKey);
      keys.push_back({"preference-every", "1000"});
      break;
    case Mode::ScanLearning:
      keys.push_back(kSchemeKey);
      keys.push_back({"alpha-grid", "0.1:1:10"});
      keys.push_back({"gamma-grid", "0:0.9:10"});
      break;
    case Mode::ScanGame:
      keys.push_back(kSchemeKey);
      keys.push_back({"l-grid", "0.1:0.45:8"});
      keys.push_back({"h-grid", "0.55:0.9:8"});
      break;
    case Mode::Transitions:
      keys.push_back(kSchemeKey);
      keys.push_back({"windows", "0:12000,12000:90000,90000:2000000,2000000:2100000"});
      break;
    case Mode::Lattice:
      keys.push_back({"n", "50"});
      break;
    case Mode::TheoryBoundary:
      break;
  }
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(std::string_view text, const std::string& where, std::string_view key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ConfigError(where, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_uint(std::string_view text, const std::string& where, std::string_view key) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc{} && ptr == last) return v;
  // Accept integral scientific notation such as 2e6.
  const double d = to_double(text, where, key);
  if (d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15) {
    throw ConfigError(where, "'" + std::string(key) + "' expects a non-negative integer, got '" +
                                 std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(d);
}

struct Resolved {
  std::string value;
  std::string origin;
};

}  // namespace

std::string_view mode_name(Mode m) noexcept {
  switch (m) {
    case Mode::Run: return "run";
    case Mode::ScanLearning: return "scan-learning";
    case Mode::ScanGame: return "scan-game";
    case Mode::Transitions: return "transitions";
    case Mode::Lattice: return "lattice";
    case Mode::TheoryBoundary: return "theory-boundary";
  }
  return "run";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept {
  for (Mode m : {Mode::Run, Mode::ScanLearning, Mode::ScanGame, Mode::Transitions, Mode::Lattice,
                 Mode::TheoryBoundary}) {
    if (mode_name(m) == name) return m;
  }
  return std::nullopt;
}

std::uint64_t ExperimentSpec::bin_width() const noexcept {
  if (bin != 0) return bin;
  const std::uint64_t w = (run.steps + 999) / 1000;
  return w == 0 ? 1 : w;
}

std::vector<Setting> parse_key_values(std::string_view text, std::string_view source) {
  std::vector<Setting> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value', got '" + content + "'");
    std::string key = trim(std::string_view(content).substr(0, eq));
    std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "missing key before '='");
    out.push_back({std::move(key), std::move(value), where});
  }
  return out;
}

std::vector<Setting> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), path.string());
}

std::vector<KeyDefault> keys_for(Mode mode) {
  std::vector<KeyDefault> keys;
  for (const KeyInfo& k : key_table(mode)) keys.push_back({k.key, k.default_value});
  return keys;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("", "empty grid");
  if (t.find(':') != std::string::npos) {
    const auto c1 = t.find(':');
    const auto c2 = t.find(':', c1 + 1);
    if (c2 == std::string::npos || t.find(':', c2 + 1) != std::string::npos) {
      throw ConfigError("", "grid range must be 'start:end:count', got '" + t + "'");
    }
    const double a = to_double(trim(t.substr(0, c1)), "", "grid");
    const double b = to_double(trim(t.substr(c1 + 1, c2 - c1 - 1)), "", "grid");
    const std::uint64_t n = to_uint(trim(t.substr(c2 + 1)), "", "grid count");
    if (n == 0) throw ConfigError("", "grid count must be >= 1");
    if (n == 1) return {a};
    for (std::uint64_t i = 0; i < n; ++i) {
      grid.push_back(i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return grid;
  }
  std::size_t pos = 0;
  while (pos <= t.size()) {
    const auto comma = t.find(',', pos);
    const std::string item = trim(std::string_view(t).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    grid.push_back(to_double(item, "", "grid"));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return grid;
}

std::vector<Window> parse_windows(std::string_view text) {
  std::vector<Window> windows;
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("", "empty window list");
  std::size_t pos = 0;
  while (true) {
    const auto comma = t.find(',', pos);
    const std::string item = trim(std::string_view(t).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("", "window must be 'start:end', got '" + item + "'");
    Window w{to_uint(trim(item.substr(0, colon)), "", "window start"),
             to_uint(trim(item.substr(colon + 1)), "", "window end")};
    if (w.end <= w.start) throw ConfigError("", "window '" + item + "' must satisfy start < end");
    windows.push_back(w);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return windows;
}

ExperimentSpec build_spec(Mode mode, const std::vector<Setting>& settings) {
  const std::vector<KeyInfo> table = key_table(mode);
  std::map<std::string, Resolved, std::less<>> values;
  for (const KeyInfo& k : table) values[std::string(k.key)] = {std::string(k.default_value), "default"};

  for (const Setting& s : settings) {
    auto it = values.find(s.key);
    if (it == values.end()) {
      throw ConfigError(s.origin, "unknown key '" + s.key + "' for mode " + std::string(mode_name(mode)));
    }
    it->second = {s.value, s.origin};
  }

  auto get = [&](std::string_view key) -> const Resolved& { return values.find(key)->second; };
  auto num = [&](std::string_view key) { return to_double(get(key).value, get(key).origin, key); };
  auto uint = [&](std::string_view key) { return to_uint(get(key).value, get(key).origin, key); };
  auto has = [&](std::string_view key) { return values.find(key) != values.end(); };
  auto rethrow_at = [&](std::string_view key, auto&& fn) {
    try {
      return fn();
    } catch (const ConfigError& e) {
      if (!e.where().empty()) throw;
      throw ConfigError(get(key).origin, "'" + std::string(key) + "': " + e.what());
    } catch (const InvalidParameter& e) {
      throw ConfigError(get(key).origin, e.what());
    }
  };

  ExperimentSpec spec;
  spec.mode = mode;

  auto check_game = [&](GameParams g, std::string_view key) {
    rethrow_at(key, [&] { g.validate(); return 0; });
  };

  spec.run.game.l = num("l");
  spec.run.game.h = num("h");
  check_game(spec.run.game, "l");
  spec.out = get("out").value;

  if (mode == Mode::TheoryBoundary) {
    spec.gamma_grid = rethrow_at("gamma-grid", [&] { return parse_grid(get("gamma-grid").value); });
    for (double g : spec.gamma_grid) {
      if (!(g >= 0.0 && g < 1.0)) {
        throw ConfigError(get("gamma-grid").origin, "gamma-grid values must lie in [0,1)");
      }
    }
  } else {
    spec.run.learn.alpha = num("alpha");
    spec.run.learn.gamma = num("gamma");
    spec.run.learn.epsilon = num("epsilon");
    rethrow_at("alpha", [&] {
      LearningParams only_alpha{spec.run.learn.alpha, 0.0, 0.0};
      only_alpha.validate();
      return 0;
    });
    rethrow_at("gamma", [&] {
      LearningParams only_gamma{1.0, spec.run.learn.gamma, 0.0};
      only_gamma.validate();
      return 0;
    });
    rethrow_at("epsilon", [&] { spec.run.learn.validate(); return 0; });

    if (has("scheme")) {
      const auto scheme = parse_scheme(get("scheme").value);
      if (!scheme) {
        throw ConfigError(get("scheme").origin, "scheme must be rotating, random or fixed, got '" +
                                                    get("scheme").value + "'");
      }
      spec.run.scheme = *scheme;
    }

    spec.run.seed = uint("seed");
    const std::uint64_t ensemble = uint("ensemble");
    if (ensemble < 1 || ensemble > 1'000'000) {
      throw ConfigError(get("ensemble").origin, "ensemble must lie in [1, 1000000]");
    }
    spec.ensemble = static_cast<int>(ensemble);
    spec.threads = static_cast<unsigned>(uint("threads"));
    spec.bin = uint("bin");
    if (has("preference-every")) {
      spec.preference_every = uint("preference-every");
      if (spec.preference_every == 0) {
        throw ConfigError(get("preference-every").origin, "preference-every must be >= 1");
      }
    }
    if (has("n")) {
      const std::uint64_t n = uint("n");
      if (n < 3 || n > 1'000'000) throw ConfigError(get("n").origin, "n must lie in [3, 1000000]");
      spec.lattice_n = static_cast<int>(n);
    }

    spec.run.transient = uint("transient");
    spec.run.window = uint("window");
    if (mode == Mode::Transitions) {
      spec.windows = rethrow_at("windows", [&] { return parse_windows(get("windows").value); });
    }
    const bool explicit_protocol = get("transient").origin != "default" || get("window").origin != "default";
    if (!get("steps").value.empty()) {
      spec.run.steps = uint("steps");
    } else if (mode == Mode::Transitions && !explicit_protocol) {
      spec.run.steps = 0;
      for (const Window& w : spec.windows) spec.run.steps = std::max(spec.run.steps, w.end);
    } else {
      spec.run.steps = spec.run.transient + spec.run.window;
      for (const Window& w : spec.windows) spec.run.steps = std::max(spec.run.steps, w.end);
    }
    // Defaulted protocol values shrink to fit a shorter run.
    if (get("window").origin == "default" && spec.run.window > spec.run.steps) {
      spec.run.window = spec.run.steps;
    }
    if (get("transient").origin == "default" && spec.run.transient + spec.run.window > spec.run.steps) {
      spec.run.transient = spec.run.steps - std::min(spec.run.window, spec.run.steps);
    }
    if (spec.run.steps == 0 && spec.run.transient == 0) {
      // empty run
    } else if (spec.run.window < 1) throw ConfigError(get("window").origin, "window must be >= 1");
    if (spec.run.transient + spec.run.window > spec.run.steps) {
      throw ConfigError(get("steps").origin, "transient + window (" +
                                                 std::to_string(spec.run.transient + spec.run.window) +
                                                 ") exceeds steps (" + std::to_string(spec.run.steps) + ")");
    }
    for (const Window& w : spec.windows) {
      if (w.end > spec.run.steps) {
        throw ConfigError(get("windows").origin, "window end " + std::to_string(w.end) +
                                                     " exceeds steps (" + std::to_string(spec.run.steps) + ")");
      }
    }

    if (mode == Mode::ScanLearning) {
      spec.alpha_grid = rethrow_at("alpha-grid", [&] { return parse_grid(get("alpha-grid").value); });
      spec.gamma_grid = rethrow_at("gamma-grid", [&] { return parse_grid(get("gamma-grid").value); });
      for (double a : spec.alpha_grid) {
        rethrow_at("alpha-grid", [&] { LearningParams{a, 0.0, 0.0}.validate(); return 0; });
      }
      for (double g : spec.gamma_grid) {
        rethrow_at("gamma-grid", [&] { LearningParams{1.0, g, 0.0}.validate(); return 0; });
      }
    }
    if (mode == Mode::ScanGame) {
      spec.l_grid = rethrow_at("l-grid", [&] { return parse_grid(get("l-grid").value); });
      spec.h_grid = rethrow_at("h-grid", [&] { return parse_grid(get("h-grid").value); });
      for (double l : spec.l_grid) check_game(GameParams{l, 0.5, spec.run.game.h}, "l-grid");
      for (double h : spec.h_grid) check_game(GameParams{spec.run.game.l, 0.5, h}, "h-grid");
    }
  }

  for (const auto& [key, resolved] : values) spec.settings[key] = resolved.value;
  if (mode != Mode::TheoryBoundary) {
    spec.settings["steps"] = std::to_string(spec.run.steps);
    spec.settings["transient"] = std::to_string(spec.run.transient);
    spec.settings["window"] = std::to_string(spec.run.window);
  }
  return spec;
}

}  // namespace fairq
