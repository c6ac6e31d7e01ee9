#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace hypmax {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b), exact for -inf operands.
inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

/// log(e^a - e^b) for a >= b. Returns -inf when a == b.
inline double log_sub_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

double log_sum_exp(std::span<const double> terms);

/// log(sinh x), x > 0, accurate for large x.
inline double log_sinh(double x) {
  if (x <= 0.0) return kNegInf;
  if (x < 20.0) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
}

inline double log_cosh(double x) {
  x = std::fabs(x);
  return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
}

/// asinh(e^l) without overflow.
inline double asinh_exp(double l) {
  if (l < 20.0) return std::asinh(std::exp(l));
  return l + std::log1p(std::sqrt(1.0 + std::exp(-2.0 * l))) ;
}

}  // namespace hypmax
