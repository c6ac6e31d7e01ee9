#include "hypmax/logmath.hpp"

#include <algorithm>

namespace hypmax {

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) return kNegInf;
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (peak == kNegInf || !std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);
  return peak + std::log(acc);
}

}  // namespace hypmax
