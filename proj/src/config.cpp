#include "evac/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "evac/text.hpp"

namespace evac {

namespace {

class Values {
 public:
  Values(std::string_view raw, std::size_t line) : raw_(raw), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  double number() const {
    double v = 0;
    if (!parse_number(raw_, v)) fail("expected a number, got '" + std::string(raw_) + "'");
    return v;
  }
  long long integer() const {
    long long v = 0;
    if (!parse_integer(raw_, v)) fail("expected an integer, got '" + std::string(raw_) + "'");
    return v;
  }
  bool boolean() const {
    if (raw_ == "true" || raw_ == "1" || raw_ == "yes") return true;
    if (raw_ == "false" || raw_ == "0" || raw_ == "no") return false;
    fail("expected true or false, got '" + std::string(raw_) + "'");
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (auto part : split(raw_, ',')) out.push_back(Values(part, line_).number());
    return out;
  }
  std::vector<long long> integers() const {
    std::vector<long long> out;
    for (auto part : split(raw_, ',')) out.push_back(Values(part, line_).integer());
    return out;
  }
  std::vector<MetricMode> modes() const {
    std::vector<MetricMode> out;
    for (auto part : split(raw_, ',')) {
      MetricMode m;
      if (!parse_metric_mode(part, m)) fail("unknown metric mode '" + std::string(part) + "'");
      out.push_back(m);
    }
    return out;
  }
  Vec3 point() const {
    const auto v = numbers();
    if (v.size() != 3) fail("expected three comma-separated coordinates");
    return {v[0], v[1], v[2]};
  }
  std::string_view text() const { return raw_; }

 private:
  std::string_view raw_;
  std::size_t line_;
};

using Setter = std::function<void(ScenarioConfig&, const Values&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [](auto member) {
      return [member](ScenarioConfig& c, const Values& v) { member(c) = v.number(); };
    };
    // scenario
    t["scenario.graph_file"] = [](ScenarioConfig& c, const Values& v) {
      c.graph_file = std::string(v.text());
    };
    t["scenario.occupancy"] = [](ScenarioConfig& c, const Values& v) {
      c.occupancies.clear();
      for (long long x : v.integers()) {
        if (x < 0) v.fail("occupancy must be >= 0");
        c.occupancies.push_back(static_cast<int>(x));
      }
    };
    t["scenario.R"] = [](ScenarioConfig& c, const Values& v) {
      c.radii = v.numbers();
      for (double r : c.radii) {
        if (r < 0.0) v.fail("R must be >= 0");
      }
    };
    t["scenario.metric_mode"] = [](ScenarioConfig& c, const Values& v) { c.modes = v.modes(); };
    t["scenario.seeds"] = [](ScenarioConfig& c, const Values& v) {
      c.seeds.clear();
      for (long long x : v.integers()) {
        if (x < 0) v.fail("seeds must be >= 0");
        c.seeds.push_back(static_cast<std::uint64_t>(x));
      }
    };
    t["scenario.replications"] = [](ScenarioConfig& c, const Values& v) {
      const long long n = v.integer();
      if (n < 1) v.fail("replications must be >= 1");
      if (static_cast<std::size_t>(n) != c.seeds.size()) {
        // Without an explicit seed list, seeds default to 1..n.
        c.seeds.clear();
        for (long long i = 1; i <= n; ++i) c.seeds.push_back(static_cast<std::uint64_t>(i));
      }
    };
    t["scenario.dynamic_grouping"] = [](ScenarioConfig& c, const Values& v) {
      c.base.dynamic_grouping = v.boolean();
    };
    t["scenario.class_one_fraction"] = num([](ScenarioConfig& c) -> double& { return c.base.class_one_fraction; });
    t["scenario.max_time"] = num([](ScenarioConfig& c) -> double& { return c.base.max_time; });
    t["scenario.tick"] = num([](ScenarioConfig& c) -> double& { return c.base.tick; });
    // hazard
    t["hazard.origin"] = [](ScenarioConfig& c, const Values& v) { c.base.hazard.origin = v.point(); };
    t["hazard.start_time"] = num([](ScenarioConfig& c) -> double& { return c.base.hazard.start_time; });
    t["hazard.spread_rate"] = num([](ScenarioConfig& c) -> double& { return c.base.hazard.spread_rate; });
    t["hazard.level_period"] = num([](ScenarioConfig& c) -> double& { return c.base.hazard.level_period; });
    // cpn
    t["cpn.smoothing"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.rnn.smoothing; });
    t["cpn.external_excitation"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.rnn.external_excitation; });
    t["cpn.exploration"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.exploration; });
    t["cpn.mailbox_capacity"] = [](ScenarioConfig& c, const Values& v) {
      const long long n = v.integer();
      if (n < 1) v.fail("mailbox_capacity must be >= 1");
      c.base.cpn.mailbox_capacity = static_cast<std::size_t>(n);
    };
    t["cpn.mailbox_expiry"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.mailbox_expiry; });
    t["cpn.hop_budget"] = [](ScenarioConfig& c, const Values& v) {
      if (v.text() == "auto") {
        c.base.cpn.hop_budget = -1;
        return;
      }
      const long long n = v.integer();
      if (n < 0) v.fail("hop_budget must be >= 0 or auto");
      c.base.cpn.hop_budget = static_cast<int>(n);
    };
    t["cpn.age_budget"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.age_budget; });
    t["cpn.hop_latency"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.hop_latency; });
    t["cpn.time_speed"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.time_speed; });
    t["cpn.safety_speed"] = num([](ScenarioConfig& c) -> double& { return c.base.cpn.safety_speed; });
    t["cpn.sps_per_tick"] = [](ScenarioConfig& c, const Values& v) {
      c.base.sps_per_tick = static_cast<int>(v.integer());
    };
    t["cpn.warmup_sps"] = [](ScenarioConfig& c, const Values& v) {
      c.base.warmup_sps = static_cast<int>(v.integer());
    };
    t["cpn.alpha"] = num([](ScenarioConfig& c) -> double& { return c.base.alpha; });
    // agents
    t["agents.class_one_speed"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_one_speed; });
    t["agents.class_two_speed"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_two_speed; });
    t["agents.class_one_fatigue"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_one_fatigue; });
    t["agents.class_two_fatigue"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_two_fatigue; });
    t["agents.class_one_damage"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_one_damage; });
    t["agents.class_two_damage"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.class_two_damage; });
    t["agents.initial_health"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.initial_health; });
    t["agents.health_threshold"] = num([](ScenarioConfig& c) -> double& { return c.base.agents.health_threshold; });
    t["agents.congestion_threshold"] = [](ScenarioConfig& c, const Values& v) {
      const long long n = v.integer();
      if (n < 1) v.fail("congestion_threshold must be >= 1");
      c.base.agents.congestion_threshold = static_cast<std::size_t>(n);
    };
    t["agents.movement_depth"] = [](ScenarioConfig& c, const Values& v) {
      c.base.agents.movement_depth = static_cast<int>(v.integer());
    };
    // metrics
    t["metrics.arrival_window"] = num([](ScenarioConfig& c) -> double& { return c.base.arrival_window; });
    t["metrics.departure_rate"] = num([](ScenarioConfig& c) -> double& { return c.base.departure_rate; });
    return t;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(cfg, Values(trim(line.substr(eq + 1)), line_no));
  }
  if (!cfg.graph_file.empty() && cfg.graph_file.is_relative() && !base_dir.empty()) {
    cfg.graph_file = base_dir / cfg.graph_file;
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

void validate(const ScenarioConfig& config) {
  if (config.graph_file.empty()) throw ConfigError("scenario.graph_file is required");
  if (config.occupancies.empty() || config.modes.empty() || config.radii.empty()) {
    throw ConfigError("occupancy, metric_mode and R need at least one value each");
  }
  if (config.seeds.empty()) throw ConfigError("at least one seed is required");
  try {
    SimParams p = config.base;
    for (int occ : config.occupancies) {
      p.occupancy = occ;
      for (double r : config.radii) {
        p.radius = r;
        validate(p);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void apply_preset(ScenarioConfig& config, std::string_view name) {
  if (name != "paper-matrix") throw ConfigError("unknown preset '" + std::string(name) + "'");
  config.occupancies = {30, 60, 90, 120};
  config.modes = {MetricMode::SM, MetricMode::TM, MetricMode::CM};
  config.seeds = {1, 2, 3, 4, 5};
}

void apply_seed_offset(ScenarioConfig& config, std::uint64_t offset) {
  for (auto& s : config.seeds) s += offset;
}

}  // namespace evac
