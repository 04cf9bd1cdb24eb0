#include "adrc/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace adrc {

namespace pt = boost::property_tree;

namespace {

constexpr std::array<double, 6> kScenario1Bandwidths{490.03, 68.58, 27.32, 818.86, 340.27, 129.61};
constexpr std::array<double, 6> kScenario2Bandwidths{586.76, 76.94, 31.52, 1057.46, 352.48, 140.34};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// The INI reader only treats whole-line comments; drop trailing ones too.
std::string strip_inline_comment(const std::string& raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if ((raw[i] == ';' || raw[i] == '#') && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
      return trim(raw.substr(0, i));
    }
  }
  return trim(raw);
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) throw ConfigError(key, key + ": expected a number, got '" + text + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) {
    throw ConfigError(key, key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(key, key + ": expected true or false, got '" + text + "'");
}

// "0.8 0.48, 0.8 0.16": one whitespace-separated pair per block.
std::vector<AmBlockGain> parse_gain_pairs(const std::string& key, const std::string& text) {
  std::vector<AmBlockGain> out;
  std::stringstream blocks(text);
  std::string block;
  while (std::getline(blocks, block, ',')) {
    std::istringstream nums(block);
    std::string a, b, extra;
    if (!(nums >> a >> b) || (nums >> extra)) {
      throw ConfigError(key, key + ": each block needs exactly two gains, got '" + trim(block) + "'");
    }
    out.push_back({parse_real(key, a), parse_real(key, b)});
  }
  return out;
}

int parse_preset(const std::string& text) {
  if (text == "scenario1") return 1;
  if (text == "scenario2") return 2;
  throw ConfigError("preset", "preset: unknown preset '" + text + "' (expected scenario1 or scenario2)");
}

using Entries = std::vector<std::pair<std::string, std::string>>;

struct Document {
  std::optional<std::string> preset;
  std::map<std::string, Entries> sections;
};

Document split_document(const pt::ptree& tree) {
  static const std::vector<std::string> known{"plant", "trajectory", "observer", "controller",
                                              "noise", "disturbance", "sim"};
  Document doc;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (name != "preset") throw ConfigError(name, "unknown top-level key '" + name + "'");
      doc.preset = strip_inline_comment(node.data());
      continue;
    }
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError(name, "unknown section [" + name + "]");
    }
    Entries& entries = doc.sections[name];
    for (const auto& [key, leaf] : node) entries.emplace_back(key, strip_inline_comment(leaf.data()));
  }
  return doc;
}

const std::string* find_entry(const Document& doc, const std::string& section, const std::string& key) {
  auto it = doc.sections.find(section);
  if (it == doc.sections.end()) return nullptr;
  for (const auto& [k, v] : it->second) {
    if (k == key) return &v;
  }
  return nullptr;
}

[[noreturn]] void unknown_key(const std::string& full) {
  throw ConfigError(full, "unknown key '" + full + "'");
}

void apply_plant(ScenarioConfig& cfg, const Entries& entries) {
  for (const auto& [k, v] : entries) {
    const std::string full = "plant." + k;
    if (k == "inertia") {
      cfg.plant.inertia = parse_real(full, v);
    } else if (k == "damping") {
      cfg.plant.damping = parse_real(full, v);
    } else if (k == "stiffness") {
      cfg.plant.stiffness = parse_real(full, v);
    } else if (k == "viscous_friction") {
      const double c = parse_real(full, v);
      cfg.plant.modeled = c == 0.0 ? std::function<double(double, double)>{}
                                   : [c](double, double qdot) { return c * qdot; };
    } else if (k == "q0") {
      cfg.plant.initial_q = parse_real(full, v);
    } else if (k == "qdot0") {
      cfg.plant.initial_qdot = parse_real(full, v);
    } else {
      unknown_key(full);
    }
  }
}

void apply_trajectory(ScenarioConfig& cfg, const Entries& entries) {
  std::string kind = std::holds_alternative<SinusoidGen>(cfg.trajectory) ? "sinusoid" : "filtered_step";
  for (const auto& [k, v] : entries) {
    if (k == "kind") kind = v;
  }
  if (kind == "filtered_step") {
    FilteredStepGen base = std::holds_alternative<FilteredStepGen>(cfg.trajectory)
                               ? std::get<FilteredStepGen>(cfg.trajectory)
                               : FilteredStepGen{};
    double step_time = base.step_time();
    double amplitude = base.amplitude();
    double tc = base.time_constant();
    for (const auto& [k, v] : entries) {
      const std::string full = "trajectory." + k;
      if (k == "kind") continue;
      if (k == "step_time") {
        step_time = parse_real(full, v);
      } else if (k == "amplitude") {
        amplitude = parse_real(full, v);
      } else if (k == "time_constant") {
        tc = parse_real(full, v);
        if (!(tc > 0.0)) throw ConfigError(full, "trajectory.time_constant must be positive");
      } else {
        unknown_key(full);
      }
    }
    cfg.trajectory = FilteredStepGen(step_time, amplitude, tc);
  } else if (kind == "sinusoid") {
    SinusoidGen gen = std::holds_alternative<SinusoidGen>(cfg.trajectory) ? std::get<SinusoidGen>(cfg.trajectory)
                                                                           : SinusoidGen{1.0, 1.0};
    for (const auto& [k, v] : entries) {
      const std::string full = "trajectory." + k;
      if (k == "kind") continue;
      if (k == "amplitude") {
        gen.amplitude = parse_real(full, v);
      } else if (k == "omega") {
        gen.angular_rate = parse_real(full, v);
      } else {
        unknown_key(full);
      }
    }
    cfg.trajectory = gen;
  } else {
    throw ConfigError("trajectory.kind", "trajectory.kind: unknown trajectory '" + kind +
                                             "' (expected filtered_step or sinusoid)");
  }
}

void apply_observer(ScenarioConfig& cfg, const Entries& entries) {
  for (const auto& [k, v] : entries) {
    const std::string full = "observer." + k;
    if (k == "variant") continue;
    if (k == "omega_o") {
      cfg.observer.bandwidth = parse_real(full, v);
    } else if (k == "omega_r") {
      cfg.observer.resonant_rate = parse_real(full, v);
    } else if (k == "alpha") {
      cfg.observer.am_gains = parse_gain_pairs(full, v);
    } else if (k == "init_from_truth") {
      cfg.observer.initialize_from_truth = parse_bool(full, v);
    } else {
      unknown_key(full);
    }
  }
}

void apply_controller(ScenarioConfig& cfg, const Entries& entries) {
  bool use_hm_hat = true;
  for (const auto& [k, v] : entries) {
    const std::string full = "controller." + k;
    if (k == "kp") {
      cfg.controller.kp = parse_real(full, v);
    } else if (k == "kd") {
      cfg.controller.kd = parse_real(full, v);
    } else if (k == "t_on") {
      cfg.controller.t_on = parse_real(full, v);
    } else if (k == "j_hat") {
      cfg.estimate.inertia = parse_real(full, v);
    } else if (k == "use_hm_hat") {
      use_hm_hat = parse_bool(full, v);
    } else {
      unknown_key(full);
    }
  }
  cfg.estimate.modeled = use_hm_hat ? cfg.plant.modeled : std::function<double(double, double)>{};
}

void apply_noise(ScenarioConfig& cfg, const Entries& entries) {
  for (const auto& [k, v] : entries) {
    const std::string full = "noise." + k;
    if (k == "kind") {
      if (v == "none") {
        cfg.noise.kind = NoiseKind::None;
      } else if (v == "gaussian") {
        cfg.noise.kind = NoiseKind::Gaussian;
      } else {
        throw ConfigError(full, full + ": expected none or gaussian, got '" + v + "'");
      }
    } else if (k == "variance") {
      cfg.noise.variance = parse_real(full, v);
    } else {
      unknown_key(full);
    }
  }
  if (cfg.noise.kind == NoiseKind::None) cfg.noise.variance = 0.0;
}

void apply_disturbance(ScenarioConfig& cfg, const Entries& entries) {
  for (const auto& [k, v] : entries) {
    const std::string full = "disturbance." + k;
    if (k == "amplitude") {
      cfg.disturbance.amplitude = parse_real(full, v);
    } else if (k == "omega") {
      cfg.disturbance.angular_rate = parse_real(full, v);
    } else if (k == "offset") {
      cfg.disturbance.offset = parse_real(full, v);
    } else if (k == "start") {
      cfg.disturbance.start = parse_real(full, v);
    } else {
      unknown_key(full);
    }
  }
}

void apply_sim(ScenarioConfig& cfg, const Entries& entries) {
  for (const auto& [k, v] : entries) {
    const std::string full = "sim." + k;
    if (k == "t_sim") {
      cfg.t_sim = parse_real(full, v);
    } else if (k == "dt") {
      cfg.dt = parse_real(full, v);
    } else if (k == "seed") {
      cfg.seed = parse_uint(full, v);
    } else if (k == "criteria_scale") {
      if (v == "integral") {
        cfg.criteria_scale = CriteriaScale::Integral;
      } else if (v == "time_average") {
        cfg.criteria_scale = CriteriaScale::TimeAverage;
      } else {
        throw ConfigError(full, full + ": expected integral or time_average, got '" + v + "'");
      }
    } else {
      unknown_key(full);
    }
  }
}

}  // namespace

const std::array<double, 6>& reference_bandwidths(int scenario) {
  if (scenario == 1) return kScenario1Bandwidths;
  if (scenario == 2) return kScenario2Bandwidths;
  throw ConfigError("scenario", "unknown scenario " + std::to_string(scenario) + " (expected 1 or 2)");
}

double reference_bandwidth(int scenario, ObserverKind kind) {
  const auto& table = reference_bandwidths(scenario);
  for (std::size_t i = 0; i < kAllObserverKinds.size(); ++i) {
    if (kAllObserverKinds[i] == kind) return table[i];
  }
  throw ConfigError("observer.variant", "observer kind has no reference bandwidth");
}

ScenarioConfig preset_config(int scenario, ObserverKind kind) {
  ScenarioConfig cfg;
  cfg.observer.kind = kind;
  cfg.observer.bandwidth = reference_bandwidth(scenario, kind);
  if (scenario == 2) cfg.noise = {NoiseKind::Gaussian, 1e-5};
  return cfg;
}

ScenarioConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& ex) {
    throw ConfigError("document", std::string("malformed config: ") + ex.what());
  }
  const Document doc = split_document(tree);

  const std::string* variant = find_entry(doc, "observer", "variant");
  if (variant == nullptr) throw ConfigError("observer.variant", "observer.variant required");
  ObserverKind kind;
  try {
    kind = parse_observer_kind(*variant);
  } catch (const std::invalid_argument&) {
    throw ConfigError("observer.variant", "observer.variant: unknown observer '" + *variant + "'");
  }

  ScenarioConfig cfg;
  if (doc.preset) {
    cfg = preset_config(parse_preset(*doc.preset), kind);
  } else {
    cfg.observer.kind = kind;
    if (find_entry(doc, "observer", "omega_o") == nullptr) {
      throw ConfigError("observer.omega_o", "observer.omega_o required when no preset is given");
    }
  }

  // Plant before controller so use_hm_hat sees the final h_m hook.
  static const std::vector<std::pair<std::string, void (*)(ScenarioConfig&, const Entries&)>> order{
      {"plant", apply_plant},     {"trajectory", apply_trajectory},   {"observer", apply_observer},
      {"noise", apply_noise},     {"disturbance", apply_disturbance}, {"sim", apply_sim},
      {"controller", apply_controller}};
  for (const auto& [name, apply] : order) {
    auto it = doc.sections.find(name);
    if (it != doc.sections.end()) {
      apply(cfg, it->second);
    } else if (name == "controller") {
      apply(cfg, {});
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("document", "cannot read config file " + path.string());
  return parse_config(in);
}

}  // namespace adrc
