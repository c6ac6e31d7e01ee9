#include "hypmax/inequalities.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hypmax/errors.hpp"
#include "hypmax/logmath.hpp"

namespace hypmax {

namespace {

double log_or_neg_inf(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// log 1/(1 - kappa^(-e)) for e > 0.
double log_geometric_tail(double log_kappa, double e) { return -std::log(-std::expm1(-e * log_kappa)); }

std::vector<double> with_table_knots(std::vector<double> bps, const RadialFunction& f) {
  if (f.kind() == RadialFunction::Kind::Table) {
    bps.insert(bps.end(), f.table_ts().begin(), f.table_ts().end());
  } else {
    const std::vector<double> own = f.breakpoints();
    bps.insert(bps.end(), own.begin(), own.end());
  }
  return bps;
}

double dual_exponent(double s) {
  if (!(s > 1.0)) throw UsageError("s must be > 1");
  return s / (s - 1.0);
}

double required_support(const RadialFunction& f) {
  const auto sup = f.support_radius();
  if (!sup || !std::isfinite(*sup)) throw UsageError("f must have compact support");
  return *sup;
}

}  // namespace

void SeqPair::validate() const {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) throw UsageError("SeqPair: kappa must be > 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw UsageError("SeqPair: p must be >= 1");
  if (!(delta > -p && delta < 1.0)) throw UsageError("SeqPair: needs -p < delta < 1");
  if (r < 1) throw UsageError("SeqPair: r must be >= 1");
  for (const auto* seq : {&c, &d}) {
    for (double v : *seq) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw UsageError("SeqPair: entries must be finite and nonnegative");
      }
    }
  }
}

double SeqPair::log_a() const {
  const double lk = std::log(kappa);
  std::vector<double> terms;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] > 0.0) terms.push_back((p - delta) * j * lk + std::log(c[j]));
  }
  return terms.empty() ? kNegInf : log_sum_exp(terms);
}

double SeqPair::log_b() const {
  const double lk = std::log(kappa);
  std::vector<double> terms;
  for (std::size_t l = 0; l < d.size(); ++l) {
    if (d[l] > 0.0) terms.push_back(l * lk + std::log(d[l]));
  }
  return terms.empty() ? kNegInf : log_sum_exp(terms);
}

double lemma31_constant(double p, double delta, double kappa) {
  const double q = p - delta;
  if (!(q > 0.0) || !(kappa > 1.0)) throw UsageError("lemma31_constant: needs p > delta, kappa > 1");
  const double lk = std::log(kappa);
  const double k = std::pow(q, 1.0 / (q + 1.0)) + std::pow(q, -q / (q + 1.0));
  const double log_c = std::log(k) + log_geometric_tail(lk, q / 2.0) / (q + 1.0) +
                       q / (q + 1.0) * log_geometric_tail(lk, 0.5);
  return std::exp(log_c);
}

IneqSides lemma31_check(const SeqPair& sp) {
  sp.validate();
  const double lk = std::log(sp.kappa);
  const double q = sp.p - sp.delta;
  std::vector<double> terms;
  for (std::size_t j = 0; j < sp.c.size(); ++j) {
    if (sp.c[j] <= 0.0) continue;
    const double lc = std::log(sp.c[j]);
    for (std::size_t l = 0; l < sp.d.size(); ++l) {
      if (sp.d[l] <= 0.0) continue;
      const double m = static_cast<double>(l + j + sp.r);
      terms.push_back(std::min(lk * (sp.delta * sp.r + m * q / 2.0) + lc,
                               lk * m / 2.0 + std::log(sp.d[l])));
    }
  }
  const double lhs = terms.empty() ? kNegInf : log_sum_exp(terms);
  const double la = sp.log_a();
  const double lb = sp.log_b();
  const double c = lemma31_constant(sp.p, sp.delta, sp.kappa);
  double rhs = kNegInf;
  if (la > kNegInf && lb > kNegInf) {
    rhs = std::log(c) + sp.p * sp.r / (q + 1.0) * lk + la / (q + 1.0) + q / (q + 1.0) * lb;
  }
  return make_sides(lhs, rhs,
                    Json{{"constant", c}, {"log_A", la}, {"log_B", lb}, {"kappa", sp.kappa},
                         {"p", sp.p}, {"delta", sp.delta}, {"r", sp.r}});
}

double lemma31_oracle_min(const SeqPair& sp) {
  sp.validate();
  const double la = sp.log_a();
  const double lb = sp.log_b();
  if (la == kNegInf || lb == kNegInf) return kNegInf;
  const double lk = std::log(sp.kappa);
  const double q = sp.p - sp.delta;
  const double first = log_geometric_tail(lk, q / 2.0) + (sp.p + sp.delta) * sp.r / 2.0 * lk + la;
  const double second = log_geometric_tail(lk, 0.5) + sp.r / 2.0 * lk + lb;
  const auto bound = [&](double rho) {
    return log_add_exp(first + rho * q / 2.0 * lk, second - rho / 2.0 * lk);
  };
  // The two terms cross here; the bound is convex in rho.
  const double cross = (second - first) / ((q + 1.0) / 2.0 * lk);
  const auto res = boost::math::tools::brent_find_minima(bound, cross - 100.0, cross + 100.0, 52);
  return res.second;
}

double log_product_integral(const RadialFunction& f, const RadialFunction& g, const RadialSet& e,
                            int n, const QuadratureSpec& q) {
  const std::vector<double> bps = with_table_knots(with_table_knots({}, f), g);
  std::vector<double> terms;
  for (const Interval& iv : e.intervals()) {
    if (!std::isfinite(iv.hi)) throw UsageError("log_product_integral: unbounded set");
    for (const QuadNode& node : composite_nodes(iv.lo, iv.hi, bps, q.radial_nodes, q.panel_width)) {
      const double v = f.log_value(node.x) + g.log_value(node.x);
      if (v == kNegInf) continue;
      terms.push_back(std::log(node.w) + v + (n - 1) * log_sinh(node.x));
    }
  }
  if (terms.empty()) return kNegInf;
  return std::log(sphere_area(n)) + log_sum_exp(terms);
}

double inverse_ball_volume(int n, double v) {
  if (!(v >= 0.0)) throw DomainError("inverse_ball_volume: v must be >= 0");
  if (v == 0.0) return 0.0;
  const double target = std::log(v);
  double hi = 1.0;
  while (log_ball_volume(n, hi) < target) hi *= 2.0;
  double lo = hi;
  while (log_ball_volume(n, lo) >= target) lo *= 0.5;
  const auto g = [&](double r) { return log_ball_volume(n, r) - target; };
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(
      g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (root.first + root.second);
}

IneqSides lemma32_sides(const RadialSet& e, const RadialSet& f, const RadialFunction& w,
                        const RadialFunction& ms_w, double s, int r, int n,
                        const QuadratureSpec& q) {
  const double sp = dual_exponent(s);
  if (r < 1) throw UsageError("lemma32: r must be >= 1");
  if (const auto sup = ms_w.support_radius(); sup && e.sup() > *sup + 1e-9) {
    throw UsageError("lemma32: M_s w table does not cover E");
  }
  const double lhs = log_set_pairing(w, e, f, r, n, q);
  const double lwf = log_weighted_radial_measure(w, f, n, q);
  const double lme = log_weighted_radial_measure(ms_w, e, n, q);
  const double rhs = -(n - 1) * r / (sp + 1.0) + lwf / (sp + 1.0) + sp / (sp + 1.0) * lme;
  return make_sides(lhs, rhs, Json{{"log_w_F", lwf}, {"log_Msw_E", lme}, {"s", s}, {"r", r}});
}

IneqSides lemma32_sides(const RadialSet& e, const RadialSet& f, const WeightSpec& w, double s,
                        int r, int n, const RadiusGrid& grid, const QuadratureSpec& q,
                        double tau_step) {
  dual_exponent(s);
  const RadialFunction wr = w.radial(n);
  if (e.empty()) return lemma32_sides(e, f, wr, RadialFunction::constant(0.0), s, r, n, q);
  const RadialFunction ms =
      m_s_table(wr, s, tau_grid(e.sup(), tau_step, e.endpoints()), grid, n, q, 1);
  return lemma32_sides(e, f, wr, ms, s, r, n, q);
}

IneqSides lemma32_sides_mc(const Region& e, const Region& f, const RadialFunction& w,
                           const RadialFunction& ms_w, double s, int r, int n, RngStream& rng,
                           long long outer, long long inner) {
  const double sp = dual_exponent(s);
  if (r < 1) throw UsageError("lemma32: r must be >= 1");
  const BallSpec env = envelope_of(e, n);
  if (const auto sup = ms_w.support_radius();
      sup && env.center.radius() + env.radius > *sup + 1e-9) {
    throw UsageError("lemma32: M_s w table does not cover the envelope of E");
  }
  const McEstimate lhs = mc_set_pairing(w, e, f, r, n, rng, outer, inner);
  const McEstimate wf = mc_region_integral(w, f, n, rng, outer);
  const McEstimate me = mc_region_integral(ms_w, e, n, rng, outer);
  const double rhs = -(n - 1) * r / (sp + 1.0) + log_or_neg_inf(wf.value) / (sp + 1.0) +
                     sp / (sp + 1.0) * log_or_neg_inf(me.value);
  return make_sides(log_or_neg_inf(lhs.value), rhs,
                    Json{{"lhs_std_error", lhs.std_error}, {"w_F", wf.value},
                         {"w_F_std_error", wf.std_error}, {"Msw_E", me.value},
                         {"Msw_E_std_error", me.std_error}, {"s", s}, {"r", r}});
}

double default_eta(int n) { return std::exp(log_ball_volume(n, 1.0) - log_ball_volume(n, 2.0)); }

Lemma33Context::Lemma33Context(RadialFunction f, const WeightSpec& w, double s, int n,
                               RadiusGrid grid, QuadratureSpec q, double tau_step, int threads)
    : f_(std::move(f)),
      w_(w.radial(n)),
      a1_(RadialFunction::constant(0.0)),
      a2_(RadialFunction::constant(0.0)),
      ms_(RadialFunction::constant(0.0)),
      s_(s),
      n_(n),
      support_(required_support(f_)),
      grid_(std::move(grid)),
      q_(q),
      tau_step_(tau_step),
      threads_(threads) {
  dual_exponent(s);
  if (!(tau_step > 0.0)) throw UsageError("lemma33: tau_step must be > 0");
  const std::vector<double> kinks = f_.breakpoints();
  a1_ = avg_table(f_, 1.0, tau_grid(support_ + 1.0, tau_step_, kinks), n_, q_, threads_);
  a2_ = avg_table(f_, 2.0, tau_grid(support_ + 2.0, tau_step_, kinks), n_, q_, threads_);
  ms_ = m_s_table(w_, s_, tau_grid(support_ + 2.0, tau_step_), grid_, n_, q_, threads_);
}

const RadialFunction& Lemma33Context::ar_a1(int r) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = ar_cache_.find(r); it != ar_cache_.end()) return it->second;
  }
  RadialFunction t = avg_table(a1_, r, tau_grid(support_ + 1.0 + r, tau_step_), n_, q_, threads_);
  std::lock_guard lock(mu_);
  return ar_cache_.emplace(r, std::move(t)).first->second;
}

double Lemma33Context::max_ar_a1(int r) const {
  const std::vector<double>& vs = ar_a1(r).table_values();
  return *std::max_element(vs.begin(), vs.end());
}

IneqSides Lemma33Context::sides(int r, double lambda, double eta) const {
  if (!(lambda > 0.0)) throw UsageError("lemma33: lambda must be > 0");
  if (!(eta > 0.0)) throw UsageError("lemma33: eta must be > 0");
  if (r < 1) throw UsageError("lemma33: r must be >= 1");
  const double sp = dual_exponent(s_);
  const double lhs = log_weighted_radial_measure(w_, superlevel_set(ar_a1(r), lambda), n_, q_);
  std::vector<double> terms;
  for (int k = 0; k <= r; ++k) {
    const double level = eta * std::exp((n_ - 1.0) * k) * lambda;
    const RadialSet set = superlevel_set(a2_, level);
    if (set.empty()) continue;
    const double m = log_weighted_radial_measure(ms_, set, n_, q_);
    if (m == kNegInf) continue;
    terms.push_back((n_ - 1.0) * (k - r) / (2.0 * sp) + (n_ - 1.0) * k + m);
  }
  const double rhs = terms.empty() ? kNegInf : log_sum_exp(terms);
  return make_sides(lhs, rhs, Json{{"r", r}, {"lambda", lambda}, {"eta", eta}, {"s", s_}});
}

IneqSides lemma33_sides(const RadialFunction& f, const WeightSpec& w, double s, int r,
                        double lambda, double eta, int n, const RadiusGrid& grid,
                        const QuadratureSpec& q) {
  return Lemma33Context(f, w, s, n, grid, q).sides(r, lambda, eta);
}

FsContext::FsContext(RadialFunction f, const WeightSpec& w, double s, int n, double lambda_min,
                     RadiusGrid grid, QuadratureSpec q, double tau_step, int threads,
                     std::optional<RadialFunction> ms_table)
    : w_(w.radial(n)),
      mf_(RadialFunction::constant(0.0)),
      s_(s),
      n_(n),
      lambda_min_(lambda_min),
      q_(q) {
  if (!(s >= 1.0)) throw UsageError("fs: s must be >= 1");
  if (!(lambda_min > 0.0)) throw UsageError("fs: lambda must be > 0");
  if (!(tau_step > 0.0)) throw UsageError("fs: tau_step must be > 0");
  const double support = required_support(f);
  const RadialSet supp = RadialSet::ball(support);
  log_f_norm_ = log_product_integral(f, RadialFunction::constant(1.0), supp, n, q);
  const double extent =
      log_f_norm_ == kNegInf ? support
                             : support + inverse_ball_volume(n, std::exp(log_f_norm_) / lambda_min);
  if (extent + support > grid.r_max) {
    throw UsageError("fs: radius grid must reach " + std::to_string(extent + support) +
                     " for this lambda");
  }
  const std::vector<double> kinks = f.breakpoints();
  mf_ = maximal_table(f, tau_grid(extent, tau_step, kinks), MaximalMode::Full, grid, n, q, threads);
  if (ms_table) {
    const auto covered = ms_table->support_radius();
    if (covered && *covered < support - 1e-9) throw UsageError("fs: M_s w table does not cover supp f");
  }
  const RadialFunction ms =
      ms_table ? *ms_table
      : s == 1.0
          ? maximal_table(w_, tau_grid(support, tau_step, kinks), MaximalMode::Full, grid, n, q, threads)
          : m_s_table(w_, s, tau_grid(support, tau_step, kinks), grid, n, q, threads);
  log_rhs_integral_ = log_product_integral(f, ms, supp, n, q);
}

IneqSides FsContext::sides(double lambda) const {
  if (!(lambda > 0.0)) throw UsageError("fs: lambda must be > 0");
  if (lambda < lambda_min_ * (1.0 - 1e-12)) {
    throw UsageError("fs: lambda below the range the maximal table was built for");
  }
  const double lhs = log_weighted_radial_measure(w_, superlevel_set(mf_, lambda, true), n_, q_);
  return make_sides(lhs, log_rhs_integral_ - std::log(lambda),
                    Json{{"lambda", lambda}, {"s", s_}, {"log_f_norm", log_f_norm_}});
}

IneqSides fs_sides(const RadialFunction& f, const WeightSpec& w, double s, double lambda, int n,
                   const RadiusGrid& grid, const QuadratureSpec& q) {
  if (!(lambda > 0.0)) throw UsageError("fs: lambda must be > 0");
  return FsContext(f, w, s, n, lambda, grid, q).sides(lambda);
}

}  // namespace hypmax
