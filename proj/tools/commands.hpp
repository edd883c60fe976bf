#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace ssm::cli {

const std::vector<std::string>& command_names();
RunReport run_command(const std::string& name, const ScenarioConfig& cfg);

// "lebesgue", "cantor", "coin", "scenario", "point" or "point:<index>", or a
// serialized exact measure.
DyadicMeasure<Rational> measure_from_spec(const json& spec, const ScenarioConfig& cfg);
// Parameter values of cfg.grid; defaults to 9 points over cfg.interval.
std::vector<Real> grid_values(const ScenarioConfig& cfg);

}  // namespace ssm::cli
