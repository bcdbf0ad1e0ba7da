#include "coalition/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "coalition/csv.hpp"
#include "coalition/errors.hpp"

namespace coalition {

namespace {

struct KeyInfo {
  const char* name;
  const char* section;
  const char* fallback;
};

// Defaults are the coalition-figure parameters at the desk-scale size.
constexpr KeyInfo kKeys[] = {
    {"experiment", "run", "stationary"},
    {"values", "run", "1, 2, 4, 8"},
    {"out", "run", "out"},
    {"seed", "run", "1"},
    {"formats", "run", "csv, json"},
    {"Z", "game", "60"},
    {"e", "game", "0.5"},
    {"theta", "game", "1"},
    {"theta_prime", "game", "1"},
    {"c", "game", "1"},
    {"c_c", "game", "1"},
    {"g_m", "game", "5/Z"},
    {"alpha", "game", "1"},
    {"beta", "game", "0.1"},
    {"mu", "game", "1/Z"},
    {"benefit", "game", "sigmoid"},
    {"benefit_amplitude", "game", "100"},
    {"benefit_steepness", "game", "100"},
    {"benefit_threshold", "game", "0.75"},
    {"benefit_slope", "game", "1"},
    {"benefit_file", "game", ""},
    {"mutation_form", "chain", "scaled"},
    {"max_states", "chain", "1000000"},
    {"tolerance", "chain", "1e-10"},
    {"max_iterations", "chain", "20000000"},
    {"grid_resolution", "field", "40"},
    {"steps", "montecarlo", "1000000"},
    {"s1_Z", "s1", "60, 100"},
    {"s1_group_size", "s1", "20"},
};

const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : kKeys)
    if (key == k.name) return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError("invalid value for key '" + key + "': '" + value + "' (" + why + ")");
}

double number(const std::string& key, const std::string& value, int Z = 0) {
  try {
    const auto slash = value.find('/');
    if (slash != std::string::npos && Z > 0 && trim(value.substr(slash + 1)) == "Z")
      return csv::parse_double(trim(value.substr(0, slash))) / Z;
    return csv::parse_double(value);
  } catch (const std::invalid_argument&) {
    bad_value(key, value, "expected a number");
  }
}

long long integer(const std::string& key, const std::string& value, long long lo) {
  long long v = 0;
  try {
    v = csv::parse_int(value);
  } catch (const std::invalid_argument&) {
    bad_value(key, value, "expected an integer");
  }
  if (v < lo) bad_value(key, value, "must be at least " + std::to_string(lo));
  return v;
}

std::vector<std::string> list(const std::string& value) {
  std::string inner = trim(value);
  if (!inner.empty() && inner.front() == '[' && inner.back() == ']') inner = inner.substr(1, inner.size() - 2);
  std::vector<std::string> items;
  for (const auto& item : csv::split(inner)) {
    auto t = trim(item);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

}  // namespace

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names{"field",    "stationary",  "sweep-alpha", "informed-map",
                                              "k-profile", "s1-compare", "montecarlo",  "figure2"};
  return names;
}

const char* config_section(const std::string& key) {
  const auto* k = find_key(key);
  return k ? k->section : nullptr;
}

ConfigPairs read_config_pairs(std::istream& in) {
  ConfigPairs pairs;
  std::string section, line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(line_no));
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      const bool known = std::any_of(std::begin(kKeys), std::end(kKeys),
                                     [&](const KeyInfo& k) { return section == k.section; });
      if (!known) throw ConfigError("unknown section '" + section + "' at line " + std::to_string(line_no));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    const auto* info = find_key(key);
    if (!info) throw ConfigError("unknown key '" + key + "' at line " + std::to_string(line_no));
    if (!section.empty() && section != info->section)
      throw ConfigError("key '" + key + "' belongs to section [" + info->section + "], found in [" + section +
                        "] at line " + std::to_string(line_no));
    if (!pairs.emplace(key, value).second)
      throw ConfigError("key '" + key + "' set twice (line " + std::to_string(line_no) + ")");
  }
  return pairs;
}

ExperimentConfig config_from_pairs(const ConfigPairs& pairs, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  for (const auto& k : kKeys) cfg.settings[k.name] = k.fallback;
  for (const auto& [key, value] : pairs) {
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
    cfg.settings[key] = value;
  }
  const auto& s = cfg.settings;
  auto get = [&](const char* key) -> const std::string& { return s.at(key); };

  cfg.experiment = get("experiment");
  const auto& names = known_experiments();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
    bad_value("experiment", cfg.experiment, "unknown experiment");
  for (const auto& v : list(get("values"))) cfg.values.push_back(number("values", v));
  cfg.out_dir = get("out");
  if (cfg.out_dir.empty()) bad_value("out", "", "empty path");
  cfg.seed = static_cast<std::uint64_t>(integer("seed", get("seed"), 0));
  for (const auto& f : list(get("formats"))) {
    if (f != "csv" && f != "json" && f != "svg") bad_value("formats", f, "expected csv, json or svg");
    cfg.formats.insert(f);
  }

  GameParams& p = cfg.params;
  p.Z = static_cast<int>(integer("Z", get("Z"), 2));
  p.e = number("e", get("e"), p.Z);
  p.theta = number("theta", get("theta"), p.Z);
  p.theta_prime = number("theta_prime", get("theta_prime"), p.Z);
  p.c = number("c", get("c"), p.Z);
  p.c_c = number("c_c", get("c_c"), p.Z);
  p.g_m = number("g_m", get("g_m"), p.Z);
  p.alpha = number("alpha", get("alpha"), p.Z);
  p.beta = number("beta", get("beta"), p.Z);
  p.mu = number("mu", get("mu"), p.Z);

  const std::string& kind = get("benefit");
  if (kind == "sigmoid") {
    p.benefit = BenefitFunction::sigmoid(number("benefit_amplitude", get("benefit_amplitude")),
                                         number("benefit_steepness", get("benefit_steepness")),
                                         number("benefit_threshold", get("benefit_threshold")));
  } else if (kind == "linear") {
    p.benefit = BenefitFunction::linear(number("benefit_slope", get("benefit_slope")));
  } else if (kind == "step") {
    p.benefit = BenefitFunction::step(number("benefit_amplitude", get("benefit_amplitude")),
                                      number("benefit_threshold", get("benefit_threshold")));
  } else if (kind == "tabulated") {
    std::filesystem::path file = get("benefit_file");
    if (file.empty()) bad_value("benefit_file", "", "required for a tabulated benefit");
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    cfg.settings["benefit_file"] = std::filesystem::absolute(file).lexically_normal().string();
    try {
      p.benefit = BenefitFunction::from_csv(file);
    } catch (const std::exception& ex) {
      bad_value("benefit_file", file.string(), ex.what());
    }
  } else {
    bad_value("benefit", kind, "expected sigmoid, linear, step or tabulated");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }

  const std::string& form = get("mutation_form");
  if (form == "scaled") {
    cfg.chain.mutation_form = MutationForm::scaled;
  } else if (form == "literal") {
    cfg.chain.mutation_form = MutationForm::literal;
  } else {
    bad_value("mutation_form", form, "expected scaled or literal");
  }
  cfg.chain.max_states = static_cast<std::size_t>(integer("max_states", get("max_states"), 1));
  cfg.solver.tolerance = number("tolerance", get("tolerance"));
  if (!(cfg.solver.tolerance > 0)) bad_value("tolerance", get("tolerance"), "must be positive");
  cfg.solver.max_iterations = static_cast<std::size_t>(integer("max_iterations", get("max_iterations"), 1));
  cfg.grid_resolution = static_cast<int>(integer("grid_resolution", get("grid_resolution"), 20));
  cfg.steps = static_cast<std::uint64_t>(integer("steps", get("steps"), 1));
  for (const auto& z : list(get("s1_Z"))) cfg.s1_Z.push_back(static_cast<int>(integer("s1_Z", z, 3)));
  cfg.s1_group_size = static_cast<int>(integer("s1_group_size", get("s1_group_size"), 2));
  for (int z : cfg.s1_Z)
    if (z < cfg.s1_group_size) bad_value("s1_Z", std::to_string(z), "smaller than s1_group_size");
  return cfg;
}

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  return config_from_pairs(read_config_pairs(in), base_dir);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

}  // namespace coalition
