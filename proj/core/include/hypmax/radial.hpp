#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypmax/geometry.hpp"

namespace hypmax {

/// Half-open radial interval [lo, hi) of distances to the origin.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Finite union of disjoint radial intervals, kept sorted.
class RadialSet {
 public:
  RadialSet() = default;
  /// Throws UsageError on overlapping or malformed intervals. Touching
  /// intervals are merged.
  static RadialSet from_intervals(std::vector<Interval> intervals);
  static RadialSet ball(double r);
  /// C_j = [j - 1, j).
  static RadialSet annulus(int j);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  bool contains(double t) const;
  double sup() const { return empty() ? 0.0 : intervals_.back().hi; }
  double inf() const { return empty() ? 0.0 : intervals_.front().lo; }
  std::vector<double> endpoints() const;
  std::string describe() const;

 private:
  std::vector<Interval> intervals_;
};

/// A measurable set of the ball model. Radial sets go through quadrature;
/// the predicate form needs an envelope ball and is handled by Monte Carlo.
struct PredicateRegion {
  std::function<bool(const Point&)> contains;
  BallSpec envelope;
  std::string name;
};
using Region = std::variant<RadialSet, BallSpec, PredicateRegion>;

bool region_contains(const Region& region, const Point& p);
std::string describe(const Region& region);

/// Piece of a piecewise-constant radial function; hi may be +infinity.
struct StepPiece {
  double lo;
  double hi;
  double value;
};

/// Nonnegative function of the distance to the origin.
///
/// Cheap to copy: the payload is shared and immutable.
class RadialFunction {
 public:
  enum class Kind { Constant, Indicator, WGamma, Power, Table, Custom };

  static RadialFunction constant(double c);
  static RadialFunction indicator(RadialSet set);
  /// (1 + mu_n(B(0, t)))^(-gamma).
  static RadialFunction w_gamma(double gamma, int n);
  /// base^exponent; nested powers collapse into one.
  static RadialFunction power(const RadialFunction& base, double exponent);
  /// Piecewise-linear through (ts[i], values[i]); `outside` beyond ts.back(),
  /// values[0] before ts.front().
  static RadialFunction table(std::vector<double> ts, std::vector<double> values,
                              double outside = 0.0);
  /// Arbitrary radial function given by its logarithm.
  static RadialFunction custom(std::string name, std::function<double(double)> log_value,
                               std::vector<double> breakpoints = {},
                               std::optional<double> support = std::nullopt);

  Kind kind() const;
  double value(double t) const;
  double log_value(double t) const;
  /// Radii where the function or its derivative jumps; used as quadrature
  /// breakpoints.
  std::vector<double> breakpoints() const;
  /// Radius beyond which the function vanishes, if any.
  std::optional<double> support_radius() const;
  /// Pieces with nonzero value when the function is piecewise constant.
  std::optional<std::vector<StepPiece>> step_form() const;
  std::string describe() const;

  // Table access (empty for other kinds).
  const std::vector<double>& table_ts() const;
  const std::vector<double>& table_values() const;

  struct Impl;

 private:
  explicit RadialFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Fraction of the sphere of radius t, centered at distance tau from a
/// reference point, that lies within distance b of that point (boundary
/// included), for the normalized surface measure on S^(n-1). The
/// expression is symmetric in tau and t.
double cap_fraction(int n, double tau, double t, double b);

/// Normalized angular mass int_0^theta sin^(n-2) / int_0^pi sin^(n-2).
double angular_fraction(int n, double theta);

}  // namespace hypmax
