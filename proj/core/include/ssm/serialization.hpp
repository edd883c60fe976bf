#pragma once

// JSON encodings of dyadic measures:
//   exact: {"resolution": n, "cells": [[index, numerator, denominator], ...]}
//   float: {"resolution": n, "cells": [[index, mass], ...]}
// Integers that do not fit in 64 bits are written as decimal strings.

#include <string>

#include "ssm/measure.hpp"

namespace ssm {

std::string to_json(const DyadicMeasure<Rational>& mu);
std::string to_json(const DyadicMeasure<double>& mu);
DyadicMeasure<Rational> exact_measure_from_json(const std::string& text);
DyadicMeasure<double> float_measure_from_json(const std::string& text);

}  // namespace ssm
