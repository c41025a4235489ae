#include "vsf/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace vsf {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  double v;
  if (!parse_double(value, v)) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"filter_order", [](SimConfig& c, auto& k, auto& v) { c.filter_order = to_uint(k, v); }},
      {"learning_rate", [](SimConfig& c, auto& k, auto& v) { c.learning_rate = to_double(k, v); }},
      {"error_threshold",
       [](SimConfig& c, auto& k, auto& v) { c.error_threshold = to_double(k, v); }},
      {"delta_min", [](SimConfig& c, auto& k, auto& v) { c.delta_min = to_double(k, v); }},
      {"max_companions", [](SimConfig& c, auto& k, auto& v) { c.max_companions = to_uint(k, v); }},
      {"training_len", [](SimConfig& c, auto& k, auto& v) { c.training_len = to_uint(k, v); }},
      {"operational_len",
       [](SimConfig& c, auto& k, auto& v) { c.operational_len = to_uint(k, v); }},
      {"revalidation_len",
       [](SimConfig& c, auto& k, auto& v) { c.revalidation_len = to_uint(k, v); }},
      {"slot_duration", [](SimConfig& c, auto& k, auto& v) { c.slot_duration = to_double(k, v); }},
      {"energy_mode", [](SimConfig& c, auto&, auto& v) { c.energy_mode = parse_energy_mode(v); }},
      {"awake_fraction",
       [](SimConfig& c, auto& k, auto& v) { c.awake_fraction = to_double(k, v); }},
      {"switch_duration",
       [](SimConfig& c, auto& k, auto& v) { c.switch_duration = to_double(k, v); }},
      {"retrain_error_limit",
       [](SimConfig& c, auto& k, auto& v) { c.retrain_error_limit = to_double(k, v); }},
      {"rng_seed", [](SimConfig& c, auto& k, auto& v) { c.rng_seed = to_uint(k, v); }},
      {"normalize_lms", [](SimConfig& c, auto& k, auto& v) { c.normalize_lms = to_bool(k, v); }},
      {"no_vsf", [](SimConfig& c, auto& k, auto& v) { c.no_vsf = to_bool(k, v); }},
      {"rotation_band", [](SimConfig& c, auto& k, auto& v) { c.rotation_band = to_double(k, v); }},
  };
  return table;
}

std::string canonical(const std::string& key) {
  if (key == "epsilon") return "error_threshold";
  return key;
}

AffineLink parse_link(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> parts;
  for (std::string p; in >> p;) parts.push_back(p);
  if (parts.size() != 4 && parts.size() != 5)
    throw ConfigError("synth.link: expected 'source target slope intercept [noise_std]'");
  AffineLink link;
  link.source = to_uint("synth.link", parts[0]);
  link.target = to_uint("synth.link", parts[1]);
  link.slope = to_double("synth.link", parts[2]);
  link.intercept = to_double("synth.link", parts[3]);
  if (parts.size() == 5) link.link_noise_std = to_double("synth.link", parts[4]);
  return link;
}

SyntheticSpec build_synthetic(const std::map<std::string, std::string>& kv,
                              const std::vector<AffineLink>& links, std::uint64_t seed) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const char* key, double fallback) {
    const auto* v = get(key);
    return v ? to_double(key, *v) : fallback;
  };

  SyntheticSpec spec;
  spec.links = links;
  spec.rng_seed = seed;
  if (const auto* v = get("synth.nodes")) spec.node_count = to_uint("synth.nodes", *v);
  if (const auto* v = get("synth.length")) spec.length = to_uint("synth.length", *v);
  if (const auto* v = get("synth.seed")) spec.rng_seed = to_uint("synth.seed", *v);
  if (const auto* v = get("synth.unit")) spec.unit = *v;

  const std::string base = get("synth.base") ? *get("synth.base") : "sine";
  std::set<std::string> allowed = {"synth.noise_std"};
  if (base == "sine") {
    SineDrift s;
    s.period = num("synth.period", s.period);
    s.amplitude = num("synth.amplitude", s.amplitude);
    s.offset = num("synth.offset", s.offset);
    s.drift_per_slot = num("synth.drift", s.drift_per_slot);
    s.phase = num("synth.phase", s.phase);
    s.noise_std = num("synth.noise_std", s.noise_std);
    spec.base = s;
    allowed.insert({"synth.period", "synth.amplitude", "synth.offset", "synth.drift",
                    "synth.phase"});
  } else if (base == "ar1") {
    Ar1 a;
    a.coeff = num("synth.coeff", a.coeff);
    a.noise_std = num("synth.noise_std", a.noise_std);
    a.start = num("synth.start", a.start);
    spec.base = a;
    allowed.insert({"synth.coeff", "synth.start"});
  } else if (base == "walk") {
    RandomWalk w;
    w.step_std = num("synth.step_std", w.step_std);
    w.start = num("synth.start", w.start);
    spec.base = w;
    allowed = {"synth.step_std", "synth.start"};
  } else {
    throw ConfigError("synth.base: expected sine, ar1 or walk, got '" + base + "'");
  }
  for (const char* key : {"synth.period", "synth.amplitude", "synth.offset", "synth.drift",
                          "synth.phase", "synth.noise_std", "synth.coeff", "synth.start",
                          "synth.step_std"})
    if (get(key) && !allowed.count(key))
      throw ConfigError(std::string(key) + " does not apply to synth.base = " + base);
  return spec;
}

}  // namespace

void set_sim_key(SimConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(canonical(key));
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

std::vector<std::string> sim_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
  static const std::set<std::string> synth_keys = {
      "synth.nodes",  "synth.length",    "synth.seed",  "synth.unit",  "synth.base",
      "synth.period", "synth.amplitude", "synth.offset", "synth.drift", "synth.phase",
      "synth.noise_std", "synth.coeff",  "synth.start", "synth.step_std"};

  RunConfig rc;
  std::map<std::string, std::string> synth;
  std::vector<AffineLink> links;
  std::set<std::string> seen;
  bool any_synth = false;
  std::size_t max_run = Interpolate{}.max_run;
  bool reject = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = origin + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");

    try {
      if (key == "synth.link") {
        links.push_back(parse_link(value));
        any_synth = true;
        continue;
      }
      const std::string name = key.rfind("synth.", 0) == 0 || key.rfind("data.", 0) == 0
                                   ? key
                                   : canonical(key);
      if (!seen.insert(name).second) throw ConfigError("key '" + key + "' given twice");
      if (synth_keys.count(key)) {
        synth[key] = value;
        any_synth = true;
      } else if (key == "data.layout") {
        rc.layout = parse_layout(value);
      } else if (key == "data.gaps") {
        if (value == "interpolate") reject = false;
        else if (value == "reject") reject = true;
        else throw ConfigError("data.gaps: expected interpolate or reject, got '" + value + "'");
      } else if (key == "data.max_run") {
        max_run = to_uint(key, value);
      } else {
        set_sim_key(rc.sim, key, value);
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (reject) rc.gaps = Reject{};
  else rc.gaps = Interpolate{max_run};
  if (any_synth) {
    try {
      rc.synthetic = build_synthetic(synth, links, rc.sim.rng_seed);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ": " + e.what());
    }
  }
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void write_sim_config(std::ostream& out, const SimConfig& cfg) {
  out << "filter_order = " << cfg.filter_order << '\n'
      << "learning_rate = " << format_double(cfg.learning_rate) << '\n'
      << "error_threshold = " << format_double(cfg.error_threshold) << '\n'
      << "delta_min = " << format_double(cfg.delta_min) << '\n'
      << "max_companions = " << cfg.max_companions << '\n'
      << "training_len = " << cfg.training_len << '\n'
      << "operational_len = " << cfg.operational_len << '\n'
      << "revalidation_len = " << cfg.revalidation_len << '\n'
      << "slot_duration = " << format_double(cfg.slot_duration) << '\n'
      << "energy_mode = " << to_string(cfg.energy_mode) << '\n'
      << "awake_fraction = " << format_double(cfg.awake_fraction) << '\n'
      << "switch_duration = " << format_double(cfg.switch_duration) << '\n'
      << "retrain_error_limit = " << format_double(cfg.retrain_error_limit) << '\n'
      << "rng_seed = " << cfg.rng_seed << '\n'
      << "normalize_lms = " << (cfg.normalize_lms ? "true" : "false") << '\n'
      << "no_vsf = " << (cfg.no_vsf ? "true" : "false") << '\n'
      << "rotation_band = " << format_double(cfg.rotation_band) << '\n';
}

}  // namespace vsf
