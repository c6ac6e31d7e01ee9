#include "hypmax/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "hypmax/errors.hpp"
#include "hypmax/logmath.hpp"

namespace hypmax {

namespace {

double parse_number(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("weight spec: bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

WeightSpec WeightSpec::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw UsageError("weight: constant must be positive");
  WeightSpec w;
  w.form_ = Form::Constant;
  w.c_ = c;
  return w;
}

WeightSpec WeightSpec::w_gamma(double gamma) {
  if (!(gamma <= 1.0)) throw UsageError("weight: w_gamma needs gamma <= 1");
  WeightSpec w;
  w.form_ = Form::WGamma;
  w.gamma_ = gamma;
  return w;
}

WeightSpec WeightSpec::power(const WeightSpec& base, double exponent) {
  if (!std::isfinite(exponent)) throw UsageError("weight: exponent must be finite");
  if (base.form_ == Form::Power) return power(*base.base_, base.exponent_ * exponent);
  if (std::fabs(exponent - 1.0) < 1e-12) return base;
  WeightSpec w;
  w.form_ = Form::Power;
  w.exponent_ = exponent;
  w.base_ = std::make_shared<const WeightSpec>(base);
  return w;
}

WeightSpec WeightSpec::radial(RadialFunction f) {
  WeightSpec w;
  w.form_ = Form::Radial;
  w.radial_ = std::make_shared<const RadialFunction>(std::move(f));
  return w;
}

WeightSpec WeightSpec::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "const") return constant(1.0);
  if (text.starts_with("const:")) return constant(parse_number(text.substr(6), "constant"));
  if (text.starts_with("gamma:")) return w_gamma(parse_number(text.substr(6), "gamma"));
  if (text.starts_with("power:")) {
    const std::string_view rest = text.substr(6);
    const std::size_t cut = rest.rfind(':');
    if (cut == std::string_view::npos || cut == 0) {
      throw UsageError("weight spec: expected power:<spec>:<exponent>");
    }
    return power(parse(rest.substr(0, cut)), parse_number(rest.substr(cut + 1), "exponent"));
  }
  throw UsageError("weight spec: unknown form '" + std::string(text) +
                   "' (expected const, gamma:<g> or power:<spec>:<e>)");
}

std::string WeightSpec::to_string() const {
  switch (form_) {
    case Form::Constant:
      return c_ == 1.0 ? "const" : "const:" + number_text(c_);
    case Form::WGamma:
      return "gamma:" + number_text(gamma_);
    case Form::Power:
      return "power:" + base_->to_string() + ":" + number_text(exponent_);
    case Form::Radial:
      return radial_->describe();
  }
  return "?";
}

const WeightSpec& WeightSpec::base() const {
  if (!base_) throw UsageError("weight: only power forms have a base");
  return *base_;
}

RadialFunction WeightSpec::radial(int n) const {
  switch (form_) {
    case Form::Constant:
      return RadialFunction::constant(c_);
    case Form::WGamma:
      return RadialFunction::w_gamma(gamma_, n);
    case Form::Power:
      return RadialFunction::power(base_->radial(n), exponent_);
    case Form::Radial:
      return *radial_;
  }
  return RadialFunction::constant(1.0);
}

double WeightSpec::log_eval(double t, int n) const { return radial(n).log_value(t); }

WeightSpec dual_weight(const WeightSpec& w, double p) {
  if (!(p > 1.0)) throw UsageError("dual_weight: p must be > 1");
  return WeightSpec::power(w, -1.0 / (p - 1.0));  // 1 - p' = -1/(p - 1)
}

namespace {

double ap_product(const RadialFunction& w, double tau, double r, double p, int n,
                  const QuadratureSpec& q) {
  const double a = avg_radial(w, tau, r, n, q);
  const double b = avg_radial(RadialFunction::power(w, -1.0 / (p - 1.0)), tau, r, n, q);
  return a * std::pow(b, p - 1.0);
}

}  // namespace

double ap_loc_ratio(const WeightSpec& w, const BallSpec& ball, double p, const QuadratureSpec& q) {
  if (!(p > 1.0)) throw UsageError("ap_loc_ratio: p must be > 1");
  ball.validate();
  if (ball.radius > 1.0) throw UsageError("ap_loc_ratio: radius must be <= 1 (use ap_global_ratio)");
  if (!(ball.radius > 0.0)) throw DomainError("ap_loc_ratio: radius must be > 0");
  const int n = ball.dim();
  return ap_product(w.radial(n), ball.center.radius(), ball.radius, p, n, q);
}

double ap_global_ratio(const WeightSpec& w, double r, double p, int n, const QuadratureSpec& q) {
  if (!(p > 1.0)) throw UsageError("ap_global_ratio: p must be > 1");
  if (!(r > 0.0)) throw DomainError("ap_global_ratio: r must be > 0");
  return ap_product(w.radial(n), 0.0, r, p, n, q);
}

namespace {

void check16(const Condition16Args& a) {
  if (a.j < 1 || a.l < 1 || a.r < 1) throw PreconditionError("condition16: j, l, r must be >= 1");
  if (std::abs(a.l - a.j) > a.r) throw PreconditionError("condition16: needs |l - j| <= r");
  if (!(a.delta < 1.0)) throw UsageError("condition16: delta must be < 1");
  if (a.n < 2) throw UsageError("condition16: n must be >= 2");
}

}  // namespace

double condition16_log_ratio(const WeightSpec& w, const Condition16Args& a, double tau,
                             const QuadratureSpec& q) {
  check16(a);
  if (!(tau >= a.j - 1.0 && tau < a.j)) throw DomainError("condition16: tau must lie in [j-1, j)");
  q.validate();
  const RadialFunction wr = w.radial(a.n);
  const double r = a.r;
  const std::vector<double> cuts = {std::fabs(tau - r), tau + r};
  std::vector<double> terms;
  for (const QuadNode& node : composite_nodes(a.l - 1.0, a.l, cuts, q.radial_nodes, q.panel_width)) {
    const double frac = cap_fraction(a.n, tau, node.x, r);
    if (frac <= 0.0) continue;
    terms.push_back(std::log(node.w) + std::log(frac) + wr.log_value(node.x) +
                    (a.n - 1) * log_sinh(node.x));
  }
  if (terms.empty()) return kNegInf;
  const double num = std::log(sphere_area(a.n)) + log_sum_exp(terms);
  const double den = (a.n - 1) * (r + a.l - a.j) * (a.p - a.delta) / 2.0 +
                     (a.n - 1) * r * a.delta + wr.log_value(tau);
  return num - den;
}

double condition16_cell_log_ratio(const WeightSpec& w, const Condition16Args& a,
                                  const QuadratureSpec& q) {
  double best = kNegInf;
  for (double off : kCondition16Taus) {
    best = std::max(best, condition16_log_ratio(w, a, a.j - off, q));
  }
  return best;
}

double log_set_pairing(const RadialFunction& w, const RadialSet& e, const RadialSet& f, int r,
                       int n, const QuadratureSpec& q) {
  if (e.empty() || f.empty()) return kNegInf;
  const RadialFunction chi_e = RadialFunction::indicator(e);
  const double reach_lo = std::max(0.0, e.inf() - r);
  const double reach_hi = e.sup() + r;
  std::vector<double> cuts = w.breakpoints();
  for (double b : e.endpoints()) {
    cuts.push_back(std::fabs(b - r));
    cuts.push_back(b + r);
  }
  std::vector<double> terms;
  for (const Interval& iv : f.intervals()) {
    const double lo = std::max(iv.lo, reach_lo);
    const double hi = std::min(iv.hi, reach_hi);
    if (!(hi > lo)) continue;
    for (const QuadNode& node : composite_nodes(lo, hi, cuts, q.radial_nodes, q.panel_width)) {
      const double avg = avg_radial(chi_e, node.x, r, n, q);
      if (avg <= 0.0) continue;
      terms.push_back(std::log(node.w) + std::log(avg) + w.log_value(node.x) +
                      (n - 1) * log_sinh(node.x));
    }
  }
  if (terms.empty()) return kNegInf;
  return std::log(sphere_area(n)) + log_sum_exp(terms);
}

namespace {

void check13(const Condition13Args& a) {
  if (a.r < 1) throw UsageError("condition13: r must be >= 1");
  if (!(a.beta > 0.0 && a.beta <= a.alpha && a.alpha < a.p)) {
    throw UsageError("condition13: needs 0 < beta <= alpha < p");
  }
  if (a.n < 2) throw UsageError("condition13: n must be >= 2");
}

}  // namespace

IneqSides condition13_sides(const WeightSpec& w, const RadialSet& e, const RadialSet& f,
                            const Condition13Args& a, const QuadratureSpec& q) {
  check13(a);
  const RadialFunction wr = w.radial(a.n);
  const double lhs = log_set_pairing(wr, e, f, a.r, a.n, q);
  const double we = log_weighted_radial_measure(wr, e, a.n, q);
  const double wf = log_weighted_radial_measure(wr, f, a.n, q);
  const double rhs = (a.n - 1) * a.r * (a.beta - 1.0) + a.alpha / a.p * we + (1.0 - a.alpha / a.p) * wf;
  return make_sides(lhs, rhs, Json{{"log_w_E", we}, {"log_w_F", wf}});
}

BallSpec envelope_of(const Region& region, int n) {
  return std::visit(
      [n](const auto& r) -> BallSpec {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RadialSet>) {
          if (!std::isfinite(r.sup())) throw UsageError("region: unbounded radial set");
          return BallSpec{Point::origin(n), r.sup()};
        } else if constexpr (std::is_same_v<T, BallSpec>) {
          return r;
        } else {
          return r.envelope;
        }
      },
      region);
}

McEstimate mc_region_integral(const RadialFunction& g, const Region& e, int n, RngStream& rng,
                              long long samples) {
  const BallSpec env = envelope_of(e, n);
  if (!(env.radius > 0.0)) return McEstimate{0.0, 0.0, samples};
  const double vol = ball_volume(n, env.radius);
  const McEstimate m = avg_mc(
      [&](const Point& p) { return region_contains(e, p) ? g.value(p.radius()) : 0.0; },
      env.center, env.radius, rng, samples);
  return McEstimate{m.value * vol, m.std_error * vol, m.n_samples};
}

McEstimate mc_set_pairing(const RadialFunction& w, const Region& e, const Region& f, int r, int n,
                          RngStream& rng, long long outer, long long inner) {
  if (outer < kMinMcSamples || inner < 1) {
    throw UsageError("mc_set_pairing: need >= 100 outer samples and >= 1 inner sample");
  }
  const BallSpec env = envelope_of(f, n);
  if (!(env.radius > 0.0)) return McEstimate{0.0, 0.0, outer};
  const double vol = ball_volume(n, env.radius);
  const McEstimate m = avg_mc(
      [&](const Point& x) {
        if (!region_contains(f, x)) return 0.0;
        const BallSampler ball(BallSpec{x, static_cast<double>(r)});
        long long hits = 0;
        for (long long i = 0; i < inner; ++i) hits += region_contains(e, ball(rng));
        return w.value(x.radius()) * static_cast<double>(hits) / static_cast<double>(inner);
      },
      env.center, env.radius, rng, outer);
  return McEstimate{m.value * vol, m.std_error * vol, m.n_samples};
}

IneqSides condition13_sides_mc(const WeightSpec& w, const Region& e, const Region& f,
                               const Condition13Args& a, RngStream& rng, long long outer_samples,
                               long long inner_samples) {
  check13(a);
  const RadialFunction wr = w.radial(a.n);
  const McEstimate lhs = mc_set_pairing(wr, e, f, a.r, a.n, rng, outer_samples, inner_samples);
  const McEstimate we = mc_region_integral(wr, e, a.n, rng, outer_samples);
  const McEstimate wf = mc_region_integral(wr, f, a.n, rng, outer_samples);
  const auto lg = [](double v) { return v > 0.0 ? std::log(v) : kNegInf; };
  const double rhs = (a.n - 1) * a.r * (a.beta - 1.0) + a.alpha / a.p * lg(we.value) +
                     (1.0 - a.alpha / a.p) * lg(wf.value);
  return make_sides(lg(lhs.value), rhs,
                    Json{{"lhs_std_error", lhs.std_error},
                         {"w_E", we.value}, {"w_E_std_error", we.std_error},
                         {"w_F", wf.value}, {"w_F_std_error", wf.std_error}});
}

void ConditionReport::add(ConditionCell cell) {
  max_ratio_log = std::max(max_ratio_log, cell.ratio_log);
  cells.push_back(std::move(cell));
}

void ConditionReport::merge(const ConditionReport& other) {
  for (const ConditionCell& c : other.cells) cells.push_back(c);
  max_ratio_log = std::max(max_ratio_log, other.max_ratio_log);
}

void ConditionReport::finalize(double bound) {
  bound_log = bound;
  max_ratio_log = kNegInf;
  for (const ConditionCell& c : cells) max_ratio_log = std::max(max_ratio_log, c.ratio_log);
  pass = max_ratio_log <= bound_log;
}

}  // namespace hypmax
