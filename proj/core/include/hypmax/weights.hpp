#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hypmax/measure_ops.hpp"
#include "hypmax/radial.hpp"
#include "hypmax/sides.hpp"

namespace hypmax {

/// A weight on the ball model, independent of the dimension until evaluated.
class WeightSpec {
 public:
  enum class Form { Constant, WGamma, Power, Radial };

  static WeightSpec constant(double c = 1.0);
  /// (1 + mu_n(B(0, t)))^(-gamma), gamma <= 1.
  static WeightSpec w_gamma(double gamma);
  /// Nested powers collapse; an overall exponent of 1 returns the base.
  static WeightSpec power(const WeightSpec& base, double exponent);
  static WeightSpec radial(RadialFunction f);

  /// "const", "const:<c>", "gamma:<g>" or "power:<spec>:<e>" (the exponent
  /// follows the last colon). Throws UsageError.
  static WeightSpec parse(std::string_view text);
  /// Inverse of parse for every form except Radial.
  std::string to_string() const;

  Form form() const { return form_; }
  double gamma() const { return gamma_; }
  double exponent() const { return exponent_; }
  double constant_value() const { return c_; }
  const WeightSpec& base() const;

  RadialFunction radial(int n) const;
  double log_eval(double t, int n) const;
  double eval(double t, int n) const { return std::exp(log_eval(t, n)); }

 private:
  Form form_ = Form::Constant;
  double c_ = 1.0;
  double gamma_ = 0.0;
  double exponent_ = 1.0;
  std::shared_ptr<const WeightSpec> base_;
  std::shared_ptr<const RadialFunction> radial_;
};

/// sigma = w^(1 - p'), p' = p/(p - 1).
WeightSpec dual_weight(const WeightSpec& w, double p);

/// (avg_B w)(avg_B w^(-1/(p-1)))^(p-1) for a ball of radius <= 1.
double ap_loc_ratio(const WeightSpec& w, const BallSpec& ball, double p, const QuadratureSpec& q);
/// The same product over the centered ball B(0, r), any r > 0.
double ap_global_ratio(const WeightSpec& w, double r, double p, int n, const QuadratureSpec& q);

struct Condition16Args {
  int j = 1;
  int l = 1;
  int r = 1;
  double p = 2.0;
  double delta = 0.0;
  int n = 2;
};

/// log of w(C_l n B(x, r)) / (e^((n-1)(r+l-j)(p-delta)/2) e^((n-1) r delta) w(x))
/// at |x| = tau in [j - 1, j). Throws PreconditionError when |l - j| > r.
double condition16_log_ratio(const WeightSpec& w, const Condition16Args& a, double tau,
                             const QuadratureSpec& q);
/// Maximum over the representative points tau = j - 1, j - 1/2, j - 1e-9.
double condition16_cell_log_ratio(const WeightSpec& w, const Condition16Args& a,
                                  const QuadratureSpec& q);
inline constexpr double kCondition16Taus[] = {1.0, 0.5, 1e-9};  // subtracted from j

struct Condition13Args {
  int r = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double p = 2.0;
  int n = 2;
};

/// lhs = int_F A_r(chi_E) w dmu_n and
/// rhs_core = e^((n-1) r (beta-1)) w(E)^(alpha/p) w(F)^(1-alpha/p), in logs.
IneqSides condition13_sides(const WeightSpec& w, const RadialSet& e, const RadialSet& f,
                            const Condition13Args& a, const QuadratureSpec& q);
/// Monte Carlo version for general regions. Metadata carries standard
/// errors of the three estimated integrals.
IneqSides condition13_sides_mc(const WeightSpec& w, const Region& e, const Region& f,
                               const Condition13Args& a, RngStream& rng, long long outer_samples,
                               long long inner_samples);

/// Lower-level pieces shared with the inequality evaluators.
double log_set_pairing(const RadialFunction& w, const RadialSet& e, const RadialSet& f, int r,
                       int n, const QuadratureSpec& q);
BallSpec envelope_of(const Region& region, int n);
/// int_E g dmu_n by uniform sampling of the envelope of E.
McEstimate mc_region_integral(const RadialFunction& g, const Region& e, int n, RngStream& rng,
                              long long samples);
/// int_F A_r(chi_E) w dmu_n with `inner` draws from each B(x, r).
McEstimate mc_set_pairing(const RadialFunction& w, const Region& e, const Region& f, int r, int n,
                          RngStream& rng, long long outer, long long inner);

struct ConditionCell {
  Json params;
  double lhs_log = kNegInf;
  double rhs_log = kNegInf;
  double ratio_log = kNegInf;
};

/// Scan of a weight condition over a parameter grid.
struct ConditionReport {
  std::string condition;
  std::vector<ConditionCell> cells;
  double max_ratio_log = kNegInf;
  double bound_log = 0.0;
  bool pass = true;

  void add(ConditionCell cell);
  /// Concatenates cells and keeps the larger maximum.
  void merge(const ConditionReport& other);
  void finalize(double bound_log_);
};

}  // namespace hypmax
