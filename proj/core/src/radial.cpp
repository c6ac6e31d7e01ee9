#include "hypmax/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hypmax/errors.hpp"
#include "hypmax/logmath.hpp"

namespace hypmax {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

RadialSet RadialSet::from_intervals(std::vector<Interval> intervals) {
  for (const Interval& iv : intervals) {
    if (!(iv.lo >= 0.0) || !(iv.hi >= iv.lo) || std::isnan(iv.hi)) {
      throw UsageError("radial set: intervals need 0 <= lo <= hi");
    }
  }
  std::erase_if(intervals, [](const Interval& iv) { return iv.hi == iv.lo; });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  RadialSet out;
  for (const Interval& iv : intervals) {
    if (!out.intervals_.empty()) {
      Interval& last = out.intervals_.back();
      if (iv.lo < last.hi) throw UsageError("radial set: overlapping intervals");
      if (iv.lo == last.hi) {
        last.hi = iv.hi;
        continue;
      }
    }
    out.intervals_.push_back(iv);
  }
  return out;
}

RadialSet RadialSet::ball(double r) {
  if (!(r >= 0.0)) throw DomainError("radial set: radius must be >= 0");
  return from_intervals({{0.0, r}});
}

RadialSet RadialSet::annulus(int j) {
  if (j < 1) throw UsageError("annulus: j must be >= 1");
  return from_intervals({{j - 1.0, static_cast<double>(j)}});
}

bool RadialSet::contains(double t) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return false;
  --it;
  return t >= it->lo && t < it->hi;
}

std::vector<double> RadialSet::endpoints() const {
  std::vector<double> out;
  for (const Interval& iv : intervals_) {
    out.push_back(iv.lo);
    if (std::isfinite(iv.hi)) out.push_back(iv.hi);
  }
  return out;
}

std::string RadialSet::describe() const {
  if (empty()) return "{}";
  std::string s;
  for (const Interval& iv : intervals_) {
    if (!s.empty()) s += " u ";
    s += "[" + fmt(iv.lo) + "," + fmt(iv.hi) + ")";
  }
  return s;
}

bool region_contains(const Region& region, const Point& p) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RadialSet>) {
          return r.contains(p.radius());
        } else if constexpr (std::is_same_v<T, BallSpec>) {
          return r.contains(p);
        } else {
          return r.contains(p);
        }
      },
      region);
}

std::string describe(const Region& region) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RadialSet>) {
          return r.describe();
        } else if constexpr (std::is_same_v<T, BallSpec>) {
          return "ball(center radius " + fmt(r.center.radius()) + ", r " + fmt(r.radius) + ")";
        } else {
          return r.name;
        }
      },
      region);
}

struct RadialFunction::Impl {
  Kind kind = Kind::Constant;
  double c = 1.0;
  RadialSet set;
  double gamma = 0.0;
  int n = 2;
  double omega = 0.0;
  std::optional<RadialFunction> base;
  double exponent = 1.0;
  std::vector<double> ts;
  std::vector<double> vs;
  double outside = 0.0;
  std::function<double(double)> log_fn;
  std::vector<double> bps;
  std::optional<double> support;
  std::string name;
};

RadialFunction RadialFunction::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("constant: value must be finite, >= 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Constant;
  impl->c = c;
  return RadialFunction(std::move(impl));
}

RadialFunction RadialFunction::indicator(RadialSet set) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Indicator;
  impl->set = std::move(set);
  return RadialFunction(std::move(impl));
}

RadialFunction RadialFunction::w_gamma(double gamma, int n) {
  if (!(gamma <= 1.0)) throw UsageError("w_gamma: gamma must be <= 1");
  if (n < 2) throw UsageError("w_gamma: n must be >= 2");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::WGamma;
  impl->gamma = gamma;
  impl->n = n;
  impl->omega = sphere_area(n);
  return RadialFunction(std::move(impl));
}

RadialFunction RadialFunction::power(const RadialFunction& base, double exponent) {
  if (!std::isfinite(exponent)) throw UsageError("power: exponent must be finite");
  if (base.kind() == Kind::Power) {
    return power(*base.impl_->base, base.impl_->exponent * exponent);
  }
  if (base.kind() == Kind::Constant && base.impl_->c > 0.0) {
    return constant(std::pow(base.impl_->c, exponent));
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Power;
  impl->base = base;
  impl->exponent = exponent;
  return RadialFunction(std::move(impl));
}

RadialFunction RadialFunction::table(std::vector<double> ts, std::vector<double> values,
                                     double outside) {
  if (ts.empty() || ts.size() != values.size()) {
    throw UsageError("table: need matching, nonempty abscissae and values");
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0 && !(ts[i] > ts[i - 1])) throw UsageError("table: abscissae must increase");
    if (!(values[i] >= 0.0)) throw DomainError("table: values must be >= 0");
  }
  if (!(outside >= 0.0)) throw DomainError("table: outside value must be >= 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Table;
  impl->ts = std::move(ts);
  impl->vs = std::move(values);
  impl->outside = outside;
  return RadialFunction(std::move(impl));
}

RadialFunction RadialFunction::custom(std::string name, std::function<double(double)> log_value,
                                      std::vector<double> breakpoints,
                                      std::optional<double> support) {
  if (!log_value) throw UsageError("custom: empty function");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Custom;
  impl->name = std::move(name);
  impl->log_fn = std::move(log_value);
  impl->bps = std::move(breakpoints);
  impl->support = support;
  return RadialFunction(std::move(impl));
}

RadialFunction::Kind RadialFunction::kind() const { return impl_->kind; }

namespace {

double table_value(const std::vector<double>& ts, const std::vector<double>& vs, double outside,
                   double t) {
  if (t <= ts.front()) return vs.front();
  if (t > ts.back()) return outside;
  const auto it = std::lower_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  if (ts[i] == t) return vs[i];
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

}  // namespace

double RadialFunction::value(double t) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Constant:
      return f.c;
    case Kind::Indicator:
      return f.set.contains(t) ? 1.0 : 0.0;
    case Kind::WGamma:
      return std::exp(log_value(t));
    case Kind::Power:
      return f.exponent == 0.0 ? 1.0 : std::pow(f.base->value(t), f.exponent);
    case Kind::Table:
      return table_value(f.ts, f.vs, f.outside, t);
    case Kind::Custom:
      return std::exp(f.log_fn(t));
  }
  return 0.0;
}

double RadialFunction::log_value(double t) const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Constant:
      return std::log(f.c);
    case Kind::Indicator:
      return f.set.contains(t) ? 0.0 : kNegInf;
    case Kind::WGamma: {
      if (f.gamma == 0.0 || t <= 0.0) return 0.0;
      if (t <= 30.0) return -f.gamma * std::log1p(f.omega * sinh_power_integral(f.n - 1, t));
      return -f.gamma * log_add_exp(0.0, log_ball_volume(f.n, t));
    }
    case Kind::Power:
      return f.exponent == 0.0 ? 0.0 : f.exponent * f.base->log_value(t);
    case Kind::Table:
      return std::log(table_value(f.ts, f.vs, f.outside, t));
    case Kind::Custom:
      return f.log_fn(t);
  }
  return kNegInf;
}

std::vector<double> RadialFunction::breakpoints() const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Indicator:
      return f.set.endpoints();
    case Kind::Power:
      return f.base->breakpoints();
    case Kind::Table:
      return {f.ts.front(), f.ts.back()};
    case Kind::Custom:
      return f.bps;
    default:
      return {};
  }
}

std::optional<double> RadialFunction::support_radius() const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Constant:
      return f.c == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    case Kind::Indicator:
      return f.set.sup();
    case Kind::Power:
      return f.exponent > 0.0 ? f.base->support_radius() : std::nullopt;
    case Kind::Table:
      return f.outside == 0.0 ? std::optional<double>(f.ts.back()) : std::nullopt;
    case Kind::Custom:
      return f.support;
    case Kind::WGamma:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::vector<StepPiece>> RadialFunction::step_form() const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Constant:
      if (f.c == 0.0) return std::vector<StepPiece>{};
      return std::vector<StepPiece>{{0.0, kInf, f.c}};
    case Kind::Indicator: {
      std::vector<StepPiece> out;
      for (const Interval& iv : f.set.intervals()) out.push_back({iv.lo, iv.hi, 1.0});
      return out;
    }
    case Kind::Power: {
      auto base = f.base->step_form();
      if (!base) return std::nullopt;
      if (f.exponent < 0.0) {
        // Gaps of the base would become +inf.
        double covered = 0.0;
        for (const StepPiece& p : *base) {
          if (p.lo != covered) return std::nullopt;
          covered = p.hi;
        }
        if (std::isfinite(covered)) return std::nullopt;
      }
      for (StepPiece& p : *base) p.value = f.exponent == 0.0 ? 1.0 : std::pow(p.value, f.exponent);
      return base;
    }
    default:
      return std::nullopt;
  }
}

std::string RadialFunction::describe() const {
  const Impl& f = *impl_;
  switch (f.kind) {
    case Kind::Constant:
      return "const(" + fmt(f.c) + ")";
    case Kind::Indicator:
      return "indicator(" + f.set.describe() + ")";
    case Kind::WGamma:
      return "w_gamma(" + fmt(f.gamma) + ")";
    case Kind::Power:
      return "power(" + f.base->describe() + "," + fmt(f.exponent) + ")";
    case Kind::Table:
      return "table(" + std::to_string(f.ts.size()) + " points on [" + fmt(f.ts.front()) + "," +
             fmt(f.ts.back()) + "])";
    case Kind::Custom:
      return f.name;
  }
  return "?";
}

const std::vector<double>& RadialFunction::table_ts() const { return impl_->ts; }
const std::vector<double>& RadialFunction::table_values() const { return impl_->vs; }

double angular_fraction(int n, double theta) {
  if (n < 2) throw UsageError("angular_fraction: n must be >= 2");
  theta = std::clamp(theta, 0.0, std::numbers::pi);
  const int k = n - 2;
  const double h = std::sin(0.5 * theta);
  const double c1 = 2.0 * h * h;  // 1 - cos(theta)
  switch (k) {
    case 0:
      return theta / std::numbers::pi;
    case 1:
      return 0.5 * c1;
    case 2: {
      double num;
      const double x = 2.0 * theta;
      if (theta < 0.5) {
        // 2 theta - sin(2 theta) as a series
        double term = x * x * x / 6.0;
        num = 0.0;
        for (int m = 1; m < 20 && term != 0.0; ++m) {
          num += term;
          term *= -x * x / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
        }
      } else {
        num = x - std::sin(x);
      }
      return num / (2.0 * std::numbers::pi);  // J_2(pi) = pi/2, J_2 = num/4
    }
    case 3:
      // J_3 = (1 - cos)^2 (2 + cos)/3, J_3(pi) = 4/3
      return c1 * c1 * (3.0 - c1) / 4.0;
    default: {
      const double s = std::sin(theta);
      const double co = std::cos(theta);
      double j_prev2 = k % 2 == 0 ? theta : c1;
      double full_prev2 = k % 2 == 0 ? std::numbers::pi : 2.0;
      double spow = k % 2 == 0 ? s : s * s;  // sin^(m-1) for the first m below
      for (int m = k % 2 == 0 ? 2 : 3; m <= k; m += 2) {
        j_prev2 = -spow * co / m + (m - 1.0) / m * j_prev2;
        full_prev2 = (m - 1.0) / m * full_prev2;
        spow *= s * s;
      }
      return std::clamp(j_prev2 / full_prev2, 0.0, 1.0);
    }
  }
}

double cap_fraction(int n, double tau, double t, double b) {
  if (tau == 0.0 || t == 0.0) return tau + t <= b ? 1.0 : 0.0;
  const double delta = std::fabs(tau - t);
  if (b <= delta) return 0.0;
  if (b >= tau + t) return 1.0;
  // sin^2(theta/2) = sinh((b - delta)/2) sinh((b + delta)/2) / (sinh tau sinh t)
  double x;
  if (b < 20.0 && tau < 20.0 && t < 20.0) {
    x = std::sinh(0.5 * (b - delta)) * std::sinh(0.5 * (b + delta)) /
        (std::sinh(tau) * std::sinh(t));
  } else {
    x = std::exp(log_sinh(0.5 * (b - delta)) + log_sinh(0.5 * (b + delta)) - log_sinh(tau) -
                 log_sinh(t));
  }
  if (x >= 1.0) return 1.0;
  return angular_fraction(n, 2.0 * std::asin(std::sqrt(x)));
}

}  // namespace hypmax
