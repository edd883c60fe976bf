#include "ssm/serialization.hpp"

#include <json.hpp>

namespace ssm {

using nlohmann::json;

namespace {

json integer_json(const Integer& z) {
  if (fits_int64(z)) return json(to_int64(z));
  return json(z.get_str());
}

Integer integer_from_json(const json& j) {
  if (j.is_number_integer()) return from_int64(j.get<std::int64_t>());
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    require(q.get_den() == 1, ErrorCode::parse, "expected an integer, got " + j.dump());
    return q.get_num();
  }
  fail(ErrorCode::parse, "expected an integer, got " + j.dump());
}

json parse_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::parse, std::string("invalid JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("resolution") && j.contains("cells") && j["cells"].is_array(),
          ErrorCode::parse, "measure JSON needs 'resolution' and 'cells'");
  return j;
}

}  // namespace

std::string to_json(const DyadicMeasure<Rational>& mu) {
  json cells = json::array();
  for (const auto& c : mu.cells())
    cells.push_back(json::array({c.index, integer_json(c.mass.get_num()), integer_json(c.mass.get_den())}));
  return json{{"resolution", mu.resolution()}, {"cells", cells}}.dump();
}

std::string to_json(const DyadicMeasure<double>& mu) {
  json cells = json::array();
  for (const auto& c : mu.cells()) cells.push_back(json::array({c.index, c.mass}));
  return json{{"resolution", mu.resolution()}, {"cells", cells}}.dump();
}

DyadicMeasure<Rational> exact_measure_from_json(const std::string& text) {
  json j = parse_object(text);
  std::vector<DyadicCell<Rational>> cells;
  for (const auto& c : j["cells"]) {
    require(c.is_array() && c.size() == 3, ErrorCode::parse, "exact cell must be [index, num, den]");
    Integer den = integer_from_json(c[2]);
    require(den != 0, ErrorCode::parse, "zero denominator");
    Rational q(integer_from_json(c[1]), den);
    q.canonicalize();
    cells.push_back({to_int64(integer_from_json(c[0])), q});
  }
  return DyadicMeasure<Rational>(j["resolution"].get<int>(), std::move(cells));
}

DyadicMeasure<double> float_measure_from_json(const std::string& text) {
  json j = parse_object(text);
  std::vector<DyadicCell<double>> cells;
  for (const auto& c : j["cells"]) {
    require(c.is_array() && c.size() == 2 && c[1].is_number(), ErrorCode::parse, "float cell must be [index, mass]");
    cells.push_back({to_int64(integer_from_json(c[0])), c[1].get<double>()});
  }
  return DyadicMeasure<double>(j["resolution"].get<int>(), std::move(cells));
}

}  // namespace ssm
