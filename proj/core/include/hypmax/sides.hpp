#pragma once

#include <cmath>

#include <nlohmann/json.hpp>

#include "hypmax/logmath.hpp"

namespace hypmax {

using Json = nlohmann::ordered_json;

/// Two sides of an inequality, in natural logs. A zero left side gives
/// ratio_log = -inf whatever the right side is.
struct IneqSides {
  double lhs_log = kNegInf;
  double rhs_log = kNegInf;
  double ratio_log = kNegInf;
  Json metadata = Json::object();
};

inline IneqSides make_sides(double lhs_log, double rhs_log, Json metadata = Json::object()) {
  IneqSides s{lhs_log, rhs_log, kNegInf, std::move(metadata)};
  if (lhs_log == kNegInf) return s;
  s.ratio_log = rhs_log == kNegInf ? INFINITY : lhs_log - rhs_log;
  return s;
}

}  // namespace hypmax
