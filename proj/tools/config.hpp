#pragma once

// Scenario configuration shared by all subcommands. Exact parameters are
// kept as JSON values ("1/3", {"minpoly":..,"interval":..}) and parsed on
// use, never through floating point.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssm/ifs.hpp"
#include "ssm/parametric.hpp"

namespace ssm::cli {

using nlohmann::json;

struct ScenarioConfig {
  std::string scenario = "bernoulli";  // bernoulli, gasket, sinai, cantor, full_branch, custom
  json parameter = "1/3";
  json ifs;                            // custom IFS
  json family;                         // custom parametric family
  std::pair<std::string, std::string> interval{"1/2", "3/5"};
  int resolution = 12;
  std::optional<std::pair<int, int>> levels;
  int m = 3;
  std::string epsilon = "1/10";
  int q = 2;
  int k = 1;
  std::string c = "1/100";
  std::pair<int, int> n{1, 8};
  std::string theta = "0.6";
  json grid;                           // {"lo","hi","step"} | {"lo","hi","maxDenominator"} | {"values":[..]}
  std::vector<json> measures;          // names or serialized measures
  std::vector<json> elements;          // liouville elements; defaults to the parameter
  int height = 1;
  bool assume = false;
  bool cover = false;
  std::uint64_t budget_atoms = kDefaultAtomBudget;
  std::string backend = "exact";
  std::string format = "csv";
  std::string out;

  bool exact() const { return backend == "exact"; }
  // Levels [a, b], defaulting to [1, resolution - m].
  std::pair<int, int> level_range() const;
  Rational epsilon_q() const;
  double epsilon_d() const;
  Real parameter_real() const;
  Ifs<Rational> make_ifs() const;
  ParamFamily make_family() const;
  void validate() const;
};

json to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const json& j);
ScenarioConfig load_config(const std::string& path);

// "a..b" or "a"
std::pair<int, int> parse_range(const std::string& text);
std::string format_range(const std::pair<int, int>& r);

}  // namespace ssm::cli
