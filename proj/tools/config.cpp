#include "config.hpp"

#include <fstream>
#include <sstream>

namespace ssm::cli {

namespace {

const char* kScenarios[] = {"bernoulli", "gasket", "sinai", "cantor", "full_branch", "custom"};

json range_json(const std::pair<int, int>& r) { return json::array({r.first, r.second}); }

std::pair<int, int> range_of(const json& j) {
  if (j.is_string()) return parse_range(j.get<std::string>());
  require(j.is_array() && j.size() == 2, ErrorCode::config, "range must be [a, b] or \"a..b\"");
  return {j[0].get<int>(), j[1].get<int>()};
}

std::string scalar_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  require(j.is_number(), ErrorCode::config, "expected a number or a string, got " + j.dump());
  return j.dump();
}

}  // namespace

std::pair<int, int> parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    fail(ErrorCode::config, "malformed range '" + text + "', expected a..b");
  }
}

std::string format_range(const std::pair<int, int>& r) {
  return std::to_string(r.first) + ".." + std::to_string(r.second);
}

std::pair<int, int> ScenarioConfig::level_range() const {
  if (levels) return *levels;
  return {1, resolution - m};
}

Rational ScenarioConfig::epsilon_q() const { return parse_rational(epsilon); }
double ScenarioConfig::epsilon_d() const { return to_double(epsilon_q()); }

Real ScenarioConfig::parameter_real() const { return real_from_json(parameter.dump()); }

Ifs<Rational> ScenarioConfig::make_ifs() const {
  if (scenario == "custom") {
    require(!ifs.is_null(), ErrorCode::config, "scenario 'custom' needs an 'ifs' object");
    return ifs_from_json(ifs.dump());
  }
  if (scenario == "cantor") return presets::cantor();
  if (scenario == "full_branch") return presets::full_branch();
  Real t = parameter_real();
  if (scenario == "bernoulli") return presets::bernoulli(t);
  if (scenario == "gasket") return presets::gasket(t);
  if (scenario == "sinai") return presets::sinai(t);
  fail(ErrorCode::config, "unknown scenario '" + scenario + "'");
}

ParamFamily ScenarioConfig::make_family() const {
  if (!family.is_null()) return family_from_json(family.dump());
  Interval<Rational> I{parse_rational(interval.first), parse_rational(interval.second)};
  if (scenario == "bernoulli") return presets::bernoulli_family(I);
  if (scenario == "gasket") return presets::gasket_family(I);
  if (scenario == "sinai") return presets::sinai_family(I);
  fail(ErrorCode::config, "scenario '" + scenario + "' has no parametric family; pass 'family'");
}

void ScenarioConfig::validate() const {
  bool known = false;
  for (const char* s : kScenarios) known = known || scenario == s;
  require(known, ErrorCode::config, "unknown scenario '" + scenario + "'");
  require(backend == "exact" || backend == "float", ErrorCode::config, "backend must be exact or float");
  require(format == "csv" || format == "json", ErrorCode::config, "format must be csv or json");
  require(budget_atoms > 0, ErrorCode::config, "budget must be positive");
  require(resolution >= 1 && resolution <= 40, ErrorCode::config, "resolution must lie in 1..40");
  require(m >= 1, ErrorCode::config, "m must be >= 1");
  require(n.first >= 1 && n.first <= n.second, ErrorCode::config, "n range must satisfy 1 <= a <= b");
  auto lv = level_range();
  require(lv.first >= 0 && lv.first <= lv.second, ErrorCode::config, "levels must satisfy 0 <= a <= b");
  require(q >= 1 && k >= 0 && height >= 1, ErrorCode::config, "need q >= 1, k >= 0, height >= 1");
  Rational e = epsilon_q();
  require(e > 0 && e < 1, ErrorCode::config, "epsilon must lie in (0, 1)");
  require(parse_rational(c) > 0, ErrorCode::config, "c must be positive");
  require(std::stod(theta) > 0, ErrorCode::config, "theta must be positive");
  parse_rational(interval.first);
  parse_rational(interval.second);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["parameter"] = cfg.parameter;
  if (!cfg.ifs.is_null()) j["ifs"] = cfg.ifs;
  if (!cfg.family.is_null()) j["family"] = cfg.family;
  j["interval"] = json::array({cfg.interval.first, cfg.interval.second});
  j["resolution"] = cfg.resolution;
  if (cfg.levels) j["levels"] = range_json(*cfg.levels);
  j["m"] = cfg.m;
  j["epsilon"] = cfg.epsilon;
  j["q"] = cfg.q;
  j["k"] = cfg.k;
  j["c"] = cfg.c;
  j["n"] = range_json(cfg.n);
  j["theta"] = cfg.theta;
  if (!cfg.grid.is_null()) j["grid"] = cfg.grid;
  if (!cfg.measures.empty()) j["measures"] = cfg.measures;
  if (!cfg.elements.empty()) j["elements"] = cfg.elements;
  j["height"] = cfg.height;
  j["assume"] = cfg.assume;
  j["cover"] = cfg.cover;
  j["budgetAtoms"] = cfg.budget_atoms;
  j["backend"] = cfg.backend;
  j["format"] = cfg.format;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  require(j.is_object(), ErrorCode::config, "config must be a JSON object");
  static const char* known[] = {"scenario", "parameter", "ifs",    "family",  "interval", "resolution", "levels",
                                "m",        "epsilon",   "q",      "k",       "c",        "n",          "theta",
                                "grid",     "measures",  "elements", "height", "assume",  "cover",      "budgetAtoms",
                                "backend",  "format",    "out"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    require(ok, ErrorCode::config, "unknown config key '" + key + "'");
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("scenario")) cfg.scenario = j["scenario"].get<std::string>();
    if (j.contains("parameter")) cfg.parameter = j["parameter"];
    if (j.contains("ifs")) cfg.ifs = j["ifs"];
    if (j.contains("family")) cfg.family = j["family"];
    if (j.contains("interval")) {
      const json& iv = j["interval"];
      require(iv.is_array() && iv.size() == 2, ErrorCode::config, "interval must be [lo, hi]");
      cfg.interval = {scalar_string(iv[0]), scalar_string(iv[1])};
    }
    if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
    if (j.contains("levels")) cfg.levels = range_of(j["levels"]);
    if (j.contains("m")) cfg.m = j["m"].get<int>();
    if (j.contains("epsilon")) cfg.epsilon = scalar_string(j["epsilon"]);
    if (j.contains("q")) cfg.q = j["q"].get<int>();
    if (j.contains("k")) cfg.k = j["k"].get<int>();
    if (j.contains("c")) cfg.c = scalar_string(j["c"]);
    if (j.contains("n")) cfg.n = range_of(j["n"]);
    if (j.contains("theta")) cfg.theta = scalar_string(j["theta"]);
    if (j.contains("grid")) cfg.grid = j["grid"];
    if (j.contains("measures")) cfg.measures = j["measures"].get<std::vector<json>>();
    if (j.contains("elements")) cfg.elements = j["elements"].get<std::vector<json>>();
    if (j.contains("height")) cfg.height = j["height"].get<int>();
    if (j.contains("assume")) cfg.assume = j["assume"].get<bool>();
    if (j.contains("cover")) cfg.cover = j["cover"].get<bool>();
    if (j.contains("budgetAtoms")) cfg.budget_atoms = j["budgetAtoms"].get<std::uint64_t>();
    if (j.contains("backend")) cfg.backend = j["backend"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("malformed config: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::config, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json(json::parse(ss.str()));
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, "invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace ssm::cli
