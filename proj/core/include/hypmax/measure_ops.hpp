#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hypmax/geometry.hpp"
#include "hypmax/quadrature.hpp"
#include "hypmax/radial.hpp"
#include "hypmax/sampling.hpp"

namespace hypmax {

/// Radii over which maximal functions take their supremum.
///
/// Geometric spacing on [r_min, 2] and `far_subdivisions` points per unit on
/// [2, r_max]; the split radius 2 is always a grid point.
struct RadiusGrid {
  double r_min = 1e-3;
  double r_max = 50.0;
  int local_points = 40;
  int far_subdivisions = 4;
  int refine_steps = 8;
  std::vector<double> points;

  static RadiusGrid standard();
  static RadiusGrid make(double r_min, double r_max, int local_points, int far_subdivisions,
                         int refine_steps);
  RadiusGrid refined() const;
  void validate() const;
};

inline constexpr double kSplitRadius = 2.0;

enum class MaximalMode { Full, Local, Far };

/// A_r f at distance tau from the origin.
///
/// Step functions are averaged exactly in the angle through cap_fraction;
/// other kinds use a product rule in (t, theta). Either way the result is
/// normalized by the discrete volume, so constants average to themselves.
double avg_radial(const RadialFunction& f, double tau, double r, int n, const QuadratureSpec& q);

/// A_r f(tau) for every r in the sorted list `radii`, in one sweep.
std::vector<double> avg_radial_sweep(const RadialFunction& f, double tau,
                                     std::span<const double> radii, int n,
                                     const QuadratureSpec& q);

/// Mean of f over mu_n-uniform points of B(x, r).
McEstimate avg_mc(const std::function<double(const Point&)>& f, const Point& x, double r,
                  RngStream& rng, long long n_samples);

/// Grid maximum of A_r f(tau), refined by golden-section search around the
/// argmax. A lower bound on the supremum.
double maximal_value(const RadialFunction& f, double tau, MaximalMode mode,
                     const RadiusGrid& grid, int n, const QuadratureSpec& q);

/// M_s w = M(w^s)^(1/s).
double m_s_weight(const RadialFunction& w, double s, double tau, const RadiusGrid& grid, int n,
                  const QuadratureSpec& q);

/// Evaluates g at each tau (in parallel) and returns the piecewise-linear
/// table, zero beyond the last abscissa.
RadialFunction tabulate(const std::function<double(double)>& g, std::vector<double> taus,
                        int threads);
RadialFunction maximal_table(const RadialFunction& f, std::vector<double> taus, MaximalMode mode,
                             const RadiusGrid& grid, int n, const QuadratureSpec& q, int threads);
RadialFunction m_s_table(const RadialFunction& w, double s, std::vector<double> taus,
                         const RadiusGrid& grid, int n, const QuadratureSpec& q, int threads);
RadialFunction avg_table(const RadialFunction& f, double r, std::vector<double> taus, int n,
                         const QuadratureSpec& q, int threads);

/// Uniform abscissae 0, h, ..., covering [0, t_max] (last point exactly t_max)
/// with the extra points merged in.
std::vector<double> tau_grid(double t_max, double h, std::span<const double> extra = {});

/// w(E) = int_E w dmu_n for a radial set E.
double weighted_radial_measure(const RadialFunction& w, const RadialSet& e, int n,
                               const QuadratureSpec& q);
double log_weighted_radial_measure(const RadialFunction& w, const RadialSet& e, int n,
                                   const QuadratureSpec& q);

/// {t : f(t) >= level} (or > level) for a table-kind function, as a radial
/// set clipped to the table range. Crossings are located by bisection on
/// the interpolant to 1e-10.
RadialSet superlevel_set(const RadialFunction& table, double level, bool strict = false);

}  // namespace hypmax
