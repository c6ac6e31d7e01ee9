#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hypmax/measure_ops.hpp"
#include "hypmax/sides.hpp"
#include "hypmax/weights.hpp"

namespace hypmax {

/// Two finite nonnegative sequences with the exponents of the arithmetic
/// lemma. A and B are recomputed on every call.
struct SeqPair {
  std::vector<double> c;
  std::vector<double> d;
  double kappa = 2.718281828459045;
  double p = 1.0;
  double delta = 0.0;
  int r = 1;

  void validate() const;
  double log_a() const;  // log sum kappa^((p-delta) j) c_j
  double log_b() const;  // log sum kappa^l d_l
};

/// The constant that comes out of the split at the optimal rho:
/// (q^(1/(q+1)) + q^(-q/(q+1))) G1^(1/(q+1)) G2^(q/(q+1)), q = p - delta,
/// with G1, G2 the tails of the geometric series in kappa^(q/2) and kappa^(1/2).
double lemma31_constant(double p, double delta, double kappa);
/// Both sides of the min-sum bound, the left by direct double summation.
IneqSides lemma31_check(const SeqPair& sp);
/// log of the minimum over real rho of the split bound, found numerically.
double lemma31_oracle_min(const SeqPair& sp);

/// lhs = int_F A_r(chi_E) w dmu_n,
/// rhs = e^(-(n-1) r/(s'+1)) w(F)^(1/(s'+1)) (int_E M_s w)^(s'/(s'+1)).
/// `ms_w` is a table of M_s w covering E.
IneqSides lemma32_sides(const RadialSet& e, const RadialSet& f, const RadialFunction& w,
                        const RadialFunction& ms_w, double s, int r, int n,
                        const QuadratureSpec& q);
IneqSides lemma32_sides(const RadialSet& e, const RadialSet& f, const WeightSpec& w, double s,
                        int r, int n, const RadiusGrid& grid, const QuadratureSpec& q,
                        double tau_step = 0.1);
/// General regions by Monte Carlo; metadata carries standard errors.
IneqSides lemma32_sides_mc(const Region& e, const Region& f, const RadialFunction& w,
                           const RadialFunction& ms_w, double s, int r, int n, RngStream& rng,
                           long long outer, long long inner);

/// Tables shared by every (r, lambda) of a distributional scan for fixed f, w, s.
class Lemma33Context {
 public:
  Lemma33Context(RadialFunction f, const WeightSpec& w, double s, int n, RadiusGrid grid,
                 QuadratureSpec q, double tau_step = 0.1, int threads = 1);

  /// lhs = w({A_r(A_1 f) >= lambda}),
  /// rhs = sum_{k=0}^r e^((n-1)(k-r)/(2s')) e^((n-1)k) M_s w({A_2 f >= eta e^((n-1)k) lambda}).
  IneqSides sides(int r, double lambda, double eta) const;
  /// sup of A_r(A_1 f) over the table.
  double max_ar_a1(int r) const;
  const RadialFunction& a1() const { return a1_; }
  const RadialFunction& a2() const { return a2_; }

 private:
  const RadialFunction& ar_a1(int r) const;

  RadialFunction f_;
  RadialFunction w_;
  RadialFunction a1_;
  RadialFunction a2_;
  RadialFunction ms_;
  double s_;
  int n_;
  double support_;
  RadiusGrid grid_;
  QuadratureSpec q_;
  double tau_step_;
  int threads_;
  mutable std::mutex mu_;
  mutable std::map<int, RadialFunction> ar_cache_;
};

/// mu_n(B(0,1)) / mu_n(B(0,2)).
double default_eta(int n);

IneqSides lemma33_sides(const RadialFunction& f, const WeightSpec& w, double s, int r,
                        double lambda, double eta, int n, const RadiusGrid& grid,
                        const QuadratureSpec& q);

/// Maximal function and M_s w tables for a weak-type scan. Valid for every
/// lambda >= lambda_min: beyond supp f + V^{-1}(||f||_1 / lambda_min) the
/// maximal function is already below lambda_min.
///
/// s = 1 gives the variant with M w on the right, which is not expected to
/// hold uniformly.
class FsContext {
 public:
  /// `ms_table`, when given, must be M_s w tabulated over the support of f.
  FsContext(RadialFunction f, const WeightSpec& w, double s, int n, double lambda_min,
            RadiusGrid grid, QuadratureSpec q, double tau_step = 0.1, int threads = 1,
            std::optional<RadialFunction> ms_table = std::nullopt);

  /// lhs = w({Mf > lambda}), rhs = (1/lambda) int |f| M_s w dmu_n.
  IneqSides sides(double lambda) const;
  double log_f_norm() const { return log_f_norm_; }
  double log_rhs_integral() const { return log_rhs_integral_; }
  const RadialFunction& maximal() const { return mf_; }
  double lambda_min() const { return lambda_min_; }

 private:
  RadialFunction w_;
  RadialFunction mf_;
  double s_;
  int n_;
  double lambda_min_;
  double log_f_norm_;
  double log_rhs_integral_;
  QuadratureSpec q_;
};

IneqSides fs_sides(const RadialFunction& f, const WeightSpec& w, double s, double lambda, int n,
                   const RadiusGrid& grid, const QuadratureSpec& q);

/// log int_E f g dmu_n over a radial set, breaking at both functions' kinks.
double log_product_integral(const RadialFunction& f, const RadialFunction& g, const RadialSet& e,
                            int n, const QuadratureSpec& q);
/// r with mu_n(B(0, r)) = v.
double inverse_ball_volume(int n, double v);

}  // namespace hypmax
