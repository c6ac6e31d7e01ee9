#include "hypmax/measure_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypmax/errors.hpp"
#include "hypmax/logmath.hpp"
#include "hypmax/parallel.hpp"

namespace hypmax {

RadiusGrid RadiusGrid::make(double r_min, double r_max, int local_points, int far_subdivisions,
                            int refine_steps) {
  if (!(r_min > 0.0) || !(r_min < kSplitRadius) || !(r_max >= kSplitRadius)) {
    throw UsageError("radius grid: need 0 < r_min < 2 <= r_max");
  }
  if (local_points < 2 || far_subdivisions < 1 || refine_steps < 0) {
    throw UsageError("radius grid: bad point counts");
  }
  RadiusGrid g;
  g.r_min = r_min;
  g.r_max = r_max;
  g.local_points = local_points;
  g.far_subdivisions = far_subdivisions;
  g.refine_steps = refine_steps;
  const double ratio = std::log(kSplitRadius / r_min) / (local_points - 1);
  for (int i = 0; i + 1 < local_points; ++i) g.points.push_back(r_min * std::exp(ratio * i));
  g.points.push_back(kSplitRadius);
  const int far = static_cast<int>(std::ceil((r_max - kSplitRadius) * far_subdivisions - 1e-9));
  for (int i = 1; i <= far; ++i) {
    g.points.push_back(std::min(r_max, kSplitRadius + static_cast<double>(i) / far_subdivisions));
  }
  g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
  return g;
}

RadiusGrid RadiusGrid::standard() { return make(1e-3, 50.0, 40, 4, 8); }

RadiusGrid RadiusGrid::refined() const {
  return make(r_min, r_max, 2 * local_points - 1, 2 * far_subdivisions, 2 * refine_steps);
}

void RadiusGrid::validate() const {
  if (points.empty()) throw UsageError("radius grid: no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i] > 0.0)) throw UsageError("radius grid: radii must be positive");
    if (i > 0 && !(points[i] > points[i - 1])) throw UsageError("radius grid: must increase");
  }
  if (!std::binary_search(points.begin(), points.end(), kSplitRadius)) {
    throw UsageError("radius grid: must contain the split radius 2");
  }
}

namespace {

void check_args(double tau, int n, const QuadratureSpec& q) {
  if (n < 2) throw UsageError("averaging: n must be >= 2");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("averaging: tau must be >= 0");
  q.validate();
}

// sinh^2(rho/2) = A + B sin^2(theta/2) along a distance-t sphere about a
// point at distance tau from the origin.
struct SphereChart {
  double a = 0.0;
  double b = 0.0;
  bool large = false;
  double tau = 0.0;
  double t = 0.0;

  SphereChart(double tau_, double t_) : tau(tau_), t(t_) {
    large = std::max(tau, t) > 30.0;
    if (!large) {
      const double h = std::sinh(0.5 * (tau - t));
      a = h * h;
      b = std::sinh(tau) * std::sinh(t);
    }
  }
  double rho(double theta) const {
    if (large) return law_of_cosines(tau, t, theta);
    const double s = std::sin(0.5 * theta);
    return 2.0 * std::asinh(std::sqrt(a + b * s * s));
  }
};

// Spherical mean of f over the distance-t sphere about the point at tau.
class SphericalMean {
 public:
  SphericalMean(const RadialFunction& f, double tau, int n, const QuadratureSpec& q)
      : f_(f), tau_(tau), n_(n), q_(q), bps_(f.breakpoints()), step_(f.step_form()) {}

  double operator()(double t) const {
    if (t == 0.0) return f_.value(tau_);
    if (step_) {
      double acc = 0.0;
      for (const StepPiece& p : *step_) {
        const double hi = std::isfinite(p.hi) ? cap_fraction(n_, tau_, t, p.hi) : 1.0;
        const double lo = p.lo > 0.0 ? cap_fraction(n_, tau_, t, p.lo) : 0.0;
        acc += p.value * (hi - lo);
      }
      return acc;
    }
    if (tau_ == 0.0) return f_.value(t);
    std::vector<double> cuts;
    const double delta = std::fabs(tau_ - t);
    for (double b : bps_) {
      if (b > delta && b < tau_ + t) {
        const double frac_theta = theta_at(t, b);
        if (frac_theta > 0.0 && frac_theta < std::numbers::pi) cuts.push_back(frac_theta);
      }
    }
    const SphereChart chart(tau_, t);
    double num = 0.0;
    double den = 0.0;
    for (const QuadNode& node :
         composite_nodes(0.0, std::numbers::pi, cuts, q_.angular_nodes,
                         std::numbers::pi / q_.angular_panels + 1e-12)) {
      const double dens = node.w * std::pow(std::sin(node.x), n_ - 2);
      num += dens * f_.value(chart.rho(node.x));
      den += dens;
    }
    return num / den;
  }

 private:
  // Angle at which the sphere crosses distance b from the origin.
  double theta_at(double t, double b) const {
    const double delta = std::fabs(tau_ - t);
    const double x = std::exp(log_sinh(0.5 * (b - delta)) + log_sinh(0.5 * (b + delta)) -
                              log_sinh(tau_) - log_sinh(t));
    return x >= 1.0 ? std::numbers::pi : 2.0 * std::asin(std::sqrt(x));
  }

  const RadialFunction& f_;
  double tau_;
  int n_;
  const QuadratureSpec& q_;
  std::vector<double> bps_;
  std::optional<std::vector<StepPiece>> step_;
};

}  // namespace

std::vector<double> avg_radial_sweep(const RadialFunction& f, double tau,
                                     std::span<const double> radii, int n,
                                     const QuadratureSpec& q) {
  check_args(tau, n, q);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw DomainError("averaging: radius must be > 0");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw UsageError("averaging: radii must increase");
  }
  std::vector<double> out(radii.size());
  if (radii.empty()) return out;
  if (f.kind() == RadialFunction::Kind::Constant) {
    std::fill(out.begin(), out.end(), f.value(0.0));
    return out;
  }
  const double r_max = radii.back();

  std::vector<double> cuts(radii.begin(), radii.end());
  for (double b : f.breakpoints()) {
    cuts.push_back(std::fabs(tau - b));
    cuts.push_back(tau + b);
  }
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c > r_max; }),
             cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Radial density sinh^(n-1), rescaled by sinh^(n-1)(r_max) when large.
  const double shift = r_max > 30.0 ? log_sinh(r_max) : 0.0;
  const auto density = [&](double t) {
    if (shift == 0.0) return std::pow(std::sinh(t), n - 1);
    return std::exp((n - 1) * (log_sinh(t) - shift));
  };

  const SphericalMean mean(f, tau, n, q);
  const GaussLegendreRule& full_rule = gauss_legendre(q.radial_nodes);
  double num = 0.0;
  double den = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double width = b - a;
    const int panels = std::max(1, static_cast<int>(std::ceil(width / q.panel_width - 1e-12)));
    // Narrow segments (between close grid radii) get proportionally fewer
    // nodes, never fewer than 8.
    int points = q.radial_nodes;
    if (panels == 1) {
      points = std::clamp(static_cast<int>(std::ceil(q.radial_nodes * width / q.panel_width)), 8,
                          q.radial_nodes);
    }
    const GaussLegendreRule& rule = points == q.radial_nodes ? full_rule : gauss_legendre(points);
    const double pw = width / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * pw;
      for (int i = 0; i < points; ++i) {
        const double t = mid + 0.5 * pw * rule.nodes[static_cast<std::size_t>(i)];
        const double m = 0.5 * pw * rule.weights[static_cast<std::size_t>(i)] * density(t);
        num += m * mean(t);
        den += m;
      }
    }
    while (next < radii.size() && radii[next] <= b) {
      out[next] = den > 0.0 ? num / den : f.value(tau);
      ++next;
    }
  }
  return out;
}

double avg_radial(const RadialFunction& f, double tau, double r, int n, const QuadratureSpec& q) {
  if (!(r > 0.0)) throw DomainError("avg_radial: r must be > 0");
  const double radii[] = {r};
  return avg_radial_sweep(f, tau, radii, n, q)[0];
}

McEstimate avg_mc(const std::function<double(const Point&)>& f, const Point& x, double r,
                  RngStream& rng, long long n_samples) {
  if (n_samples < kMinMcSamples) throw UsageError("avg_mc: need >= 100 samples");
  if (!(r > 0.0)) throw DomainError("avg_mc: r must be > 0");
  const BallSampler sampler(BallSpec{x, r});
  double mean = 0.0;
  double m2 = 0.0;
  for (long long i = 0; i < n_samples; ++i) {
    const double v = f(sampler(rng));
    const double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  const double var = m2 / static_cast<double>(n_samples - 1);
  return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(n_samples)), n_samples};
}

double maximal_value(const RadialFunction& f, double tau, MaximalMode mode,
                     const RadiusGrid& grid, int n, const QuadratureSpec& q) {
  grid.validate();
  std::vector<double> radii;
  for (double r : grid.points) {
    if (mode == MaximalMode::Local && r > kSplitRadius) continue;
    if (mode == MaximalMode::Far && r < kSplitRadius) continue;
    radii.push_back(r);
  }
  if (radii.empty()) throw UsageError("maximal_value: no radii left for this mode");
  if (f.kind() == RadialFunction::Kind::Constant) return f.value(0.0);

  const std::vector<double> values = avg_radial_sweep(f, tau, radii, n, q);
  const std::size_t i =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  double best = values[i];
  if (grid.refine_steps == 0) return best;

  double lo = i > 0 ? radii[i - 1] : (mode == MaximalMode::Far ? radii[i] : 0.5 * radii[i]);
  double hi = i + 1 < radii.size() ? radii[i + 1] : radii[i];
  if (!(hi > lo)) return best;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = avg_radial(f, tau, x1, n, q);
  double f2 = avg_radial(f, tau, x2, n, q);
  best = std::max({best, f1, f2});
  for (int step = 0; step < grid.refine_steps; ++step) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = avg_radial(f, tau, x1, n, q);
      best = std::max(best, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = avg_radial(f, tau, x2, n, q);
      best = std::max(best, f2);
    }
  }
  return best;
}

double m_s_weight(const RadialFunction& w, double s, double tau, const RadiusGrid& grid, int n,
                  const QuadratureSpec& q) {
  if (!(s > 1.0)) throw UsageError("m_s_weight: s must be > 1");
  return std::pow(maximal_value(RadialFunction::power(w, s), tau, MaximalMode::Full, grid, n, q),
                  1.0 / s);
}

RadialFunction tabulate(const std::function<double(double)>& g, std::vector<double> taus,
                        int threads) {
  std::vector<double> values(taus.size());
  parallel_for(taus.size(), threads, [&](std::size_t i) { values[i] = g(taus[i]); });
  return RadialFunction::table(std::move(taus), std::move(values));
}

RadialFunction maximal_table(const RadialFunction& f, std::vector<double> taus, MaximalMode mode,
                             const RadiusGrid& grid, int n, const QuadratureSpec& q, int threads) {
  return tabulate([&](double t) { return maximal_value(f, t, mode, grid, n, q); },
                  std::move(taus), threads);
}

RadialFunction m_s_table(const RadialFunction& w, double s, std::vector<double> taus,
                         const RadiusGrid& grid, int n, const QuadratureSpec& q, int threads) {
  if (!(s > 1.0)) throw UsageError("m_s_table: s must be > 1");
  const RadialFunction ws = RadialFunction::power(w, s);
  return tabulate(
      [&](double t) {
        return std::pow(maximal_value(ws, t, MaximalMode::Full, grid, n, q), 1.0 / s);
      },
      std::move(taus), threads);
}

RadialFunction avg_table(const RadialFunction& f, double r, std::vector<double> taus, int n,
                         const QuadratureSpec& q, int threads) {
  return tabulate([&](double t) { return avg_radial(f, t, r, n, q); }, std::move(taus), threads);
}

std::vector<double> tau_grid(double t_max, double h, std::span<const double> extra) {
  if (!(t_max > 0.0) || !(h > 0.0)) throw UsageError("tau_grid: need t_max > 0 and h > 0");
  std::vector<double> ts;
  const int steps = static_cast<int>(std::ceil(t_max / h - 1e-9));
  for (int i = 0; i < steps; ++i) ts.push_back(i * h);
  ts.push_back(t_max);
  for (double e : extra) {
    if (e >= 0.0 && e <= t_max) ts.push_back(e);
  }
  std::sort(ts.begin(), ts.end());
  std::vector<double> out;
  for (double t : ts) {
    if (out.empty() || t - out.back() > 1e-9) out.push_back(t);
  }
  return out;
}

double log_weighted_radial_measure(const RadialFunction& w, const RadialSet& e, int n,
                                   const QuadratureSpec& q) {
  if (n < 2) throw UsageError("weighted measure: n must be >= 2");
  q.validate();
  const std::vector<double> bps = w.breakpoints();
  std::vector<double> terms;
  for (const Interval& iv : e.intervals()) {
    if (!std::isfinite(iv.hi)) throw UsageError("weighted measure: unbounded interval");
    for (const QuadNode& node : composite_nodes(iv.lo, iv.hi, bps, q.radial_nodes, q.panel_width)) {
      terms.push_back(std::log(node.w) + w.log_value(node.x) + (n - 1) * log_sinh(node.x));
    }
  }
  if (terms.empty()) return kNegInf;
  return std::log(sphere_area(n)) + log_sum_exp(terms);
}

double weighted_radial_measure(const RadialFunction& w, const RadialSet& e, int n,
                               const QuadratureSpec& q) {
  return std::exp(log_weighted_radial_measure(w, e, n, q));
}

RadialSet superlevel_set(const RadialFunction& table, double level, bool strict) {
  if (table.kind() != RadialFunction::Kind::Table) {
    throw UsageError("superlevel_set: needs a table-kind function");
  }
  const std::vector<double>& ts = table.table_ts();
  const std::vector<double>& vs = table.table_values();
  const auto inside = [&](double v) { return strict ? v > level : v >= level; };
  std::vector<Interval> out;
  bool in = inside(vs[0]);
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const bool next_in = inside(vs[i + 1]);
    if (next_in == in) continue;
    // Bisection on the linear interpolant of this segment.
    double a = ts[i];
    double b = ts[i + 1];
    const auto g = [&](double t) {
      return vs[i] + (t - ts[i]) / (ts[i + 1] - ts[i]) * (vs[i + 1] - vs[i]);
    };
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      if (inside(g(m)) == in) a = m; else b = m;
    }
    const double cross = 0.5 * (a + b);
    if (in) out.push_back({start, cross});
    else start = cross;
    in = next_in;
  }
  if (in) out.push_back({start, ts.back()});
  return RadialSet::from_intervals(std::move(out));
}

}  // namespace hypmax
