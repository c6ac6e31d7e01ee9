#include "hypmax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypmax/errors.hpp"
#include "hypmax/logmath.hpp"
#include "hypmax/quadrature.hpp"

namespace hypmax {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void require_same_dim(const Point& x, const Point& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw UsageError(std::string(op) + ": dimension mismatch (" + std::to_string(x.dim()) +
                     " vs " + std::to_string(y.dim()) + ")");
  }
}

// int_0^t sinh^k in the linear domain, cheap enough for the sampling loop.
double linear_sinh_power_integral(int k, double t) {
  if (t <= 0.0) return 0.0;
  if (k == 0) return t;
  if (k == 1) {
    const double h = std::sinh(0.5 * t);
    return 2.0 * h * h;
  }
  if (k == 3) {
    // (cosh t - 1)^2 (cosh t + 2) / 3, with cosh t - 1 = 2 sinh^2(t/2)
    const double h = std::sinh(0.5 * t);
    const double c1 = 2.0 * h * h;
    return c1 * c1 * (c1 + 3.0) / 3.0;
  }
  if (t <= 0.5 || (k >= 4 && t <= 1.0)) {
    // The recurrence below cancels for small t; sinh^k is smooth here.
    static const GaussLegendreRule& rule = gauss_legendre(14);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = std::sinh(0.5 * t * (rule.nodes[i] + 1.0));
      double p = s;
      for (int m = 1; m < k; ++m) p *= s;
      acc += rule.weights[i] * p;
    }
    return 0.5 * t * acc;
  }
  const double sh = std::sinh(t);
  const double ch = std::cosh(t);
  double prev2 = t;                           // k = 0
  double prev1 = ch - 1.0;                    // k = 1
  double power = sh;                          // sinh^(m-1)
  double cur = prev1;
  for (int m = 2; m <= k; ++m) {
    cur = power * ch / m - (m - 1.0) / m * prev2;
    power *= sh;
    prev2 = prev1;
    prev1 = cur;
  }
  return cur;
}

}  // namespace

Point Point::origin(int dim) {
  if (dim < 2) throw UsageError("point: dimension must be >= 2");
  return Point(Coords(static_cast<std::size_t>(dim), 0.0), 1.0);
}

Point Point::from_coords(std::span<const double> coords) {
  if (coords.size() < 2) throw UsageError("point: dimension must be >= 2");
  const double n2 = dot(coords, coords);
  if (!(n2 < 1.0)) throw DomainError("point: coordinates must lie in the open unit ball");
  return Point(Coords(coords.begin(), coords.end()), 1.0 - n2);
}

Point Point::from_polar(std::span<const double> direction, double radius) {
  if (direction.size() < 2) throw UsageError("point: dimension must be >= 2");
  if (!std::isfinite(radius)) throw DomainError("point: radius must be finite");
  const double len = std::sqrt(dot(direction, direction));
  if (!(len > 0.0)) throw DomainError("point: direction must be nonzero");
  // Euclidean norm tanh(r/2); gap 1 - tanh^2 = 1/cosh^2(r/2).
  const double e = std::tanh(0.5 * radius) / len;
  Coords c(direction.begin(), direction.end());
  for (double& v : c) v *= e;
  const double ch = std::cosh(0.5 * radius);
  return Point(std::move(c), 1.0 / (ch * ch));
}

Point Point::on_axis(int dim, double radius) {
  if (dim < 2) throw UsageError("point: dimension must be >= 2");
  Coords dir(static_cast<std::size_t>(dim), 0.0);
  dir[0] = 1.0;
  return from_polar(view(dir), radius);
}

double Point::norm() const { return std::sqrt(dot(coords(), coords())); }

double Point::radius() const {
  const double r = norm();
  return 2.0 * std::log1p(r) - std::log(gap_);
}

Point Point::negated() const {
  Coords c = coords_;
  for (double& v : c) v = -v;
  return Point(std::move(c), gap_);
}

void BallSpec::validate() const {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("ball: radius must be finite and >= 0");
  }
}

bool BallSpec::contains(const Point& p, double tolerance) const {
  return distance(center, p) <= radius + tolerance;
}

double distance(const Point& x, const Point& y) {
  require_same_dim(x, y, "distance");
  double d2 = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const double t = x[i] - y[i];
    d2 += t * t;
  }
  // arccosh(1 + 2u^2) = 2 asinh(u)
  return 2.0 * std::asinh(std::sqrt(d2 / (x.gap() * y.gap())));
}

double appendix_distance(const Point& x, const Point& y) {
  require_same_dim(x, y, "appendix_distance");
  double d2 = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const double t = x[i] - y[i];
    d2 += t * t;
  }
  const double nx2 = dot(x.coords(), x.coords());
  const double ny2 = dot(y.coords(), y.coords());
  const double den = 1.0 - 2.0 * dot(x.coords(), y.coords()) + nx2 * ny2;
  return std::atanh(std::sqrt(d2 / den));
}

double sphere_area(int n) {
  if (n < 2) throw UsageError("sphere_area: n must be >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double log_sinh_power_integral(int k, double r) {
  if (k < 0) throw UsageError("sinh power integral: k must be >= 0");
  if (!(r >= 0.0)) throw DomainError("sinh power integral: r must be >= 0");
  if (r == 0.0) return kNegInf;
  if (r <= 30.0) return std::log(linear_sinh_power_integral(k, r));
  // I_k = sinh^(k-1) cosh / k - (k-1)/k I_(k-2), carried in logs.
  const double ls = log_sinh(r);
  const double lc = log_cosh(r);
  double prev2 = std::log(r);
  double prev1 = std::log(2.0) + 2.0 * log_sinh(0.5 * r);
  if (k == 1) return prev1;
  double cur = prev1;
  for (int m = 2; m <= k; ++m) {
    cur = log_sub_exp((m - 1) * ls + lc - std::log(m), std::log((m - 1.0) / m) + prev2);
    prev2 = prev1;
    prev1 = cur;
  }
  return cur;
}

double sinh_power_integral(int k, double r) {
  if (k < 0) throw UsageError("sinh power integral: k must be >= 0");
  if (!(r >= 0.0)) throw DomainError("sinh power integral: r must be >= 0");
  if (r <= 30.0) return linear_sinh_power_integral(k, r);
  return std::exp(log_sinh_power_integral(k, r));
}

double log_ball_volume(int n, double r) {
  if (n < 2) throw UsageError("ball_volume: n must be >= 2");
  if (!(r >= 0.0)) throw DomainError("ball_volume: r must be >= 0");
  return std::log(sphere_area(n)) + log_sinh_power_integral(n - 1, r);
}

double ball_volume(int n, double r) {
  if (n < 2) throw UsageError("ball_volume: n must be >= 2");
  if (!(r >= 0.0)) throw DomainError("ball_volume: r must be >= 0");
  return sphere_area(n) * sinh_power_integral(n - 1, r);
}

double law_of_cosines(double a, double b, double gamma) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("law_of_cosines: sides must be >= 0");
  if (!(gamma >= 0.0 && gamma <= std::numbers::pi)) {
    throw DomainError("law_of_cosines: angle must lie in [0, pi]");
  }
  // sinh^2(c/2) = sinh^2((a-b)/2) + sinh a sinh b sin^2(gamma/2), free of the
  // cancellation in cosh a cosh b - sinh a sinh b cos gamma.
  const double sg = std::sin(0.5 * gamma);
  if (std::max(a, b) <= 30.0) {
    const double sd = std::sinh(0.5 * (a - b));
    return 2.0 * std::asinh(std::sqrt(sd * sd + std::sinh(a) * std::sinh(b) * sg * sg));
  }
  const double l1 = 2.0 * log_sinh(0.5 * std::fabs(a - b));
  const double l2 = sg > 0.0 ? log_sinh(a) + log_sinh(b) + 2.0 * std::log(sg) : kNegInf;
  const double l = log_add_exp(l1, l2);
  if (l == kNegInf) return 0.0;
  return 2.0 * asinh_exp(0.5 * l);
}

Point mobius_translate(const Point& a, const Point& z) {
  require_same_dim(a, z, "mobius_translate");
  // The map is an isometry only if a's gap matches a's rounded coordinates, so
  // that gap is recomputed in extended precision rather than taken as stored.
  // 1 + 2<a,z> + |a|^2|z|^2 = |a + z|^2 + gap(a) gap(z); the left side cancels
  // down to ~gap^2 when z is near -a, the right side does not.
  long double a2 = 0.0L, sum2 = 0.0L;
  for (int i = 0; i < a.dim(); ++i) {
    const long double ai = a[i], zi = z[i];
    a2 += ai * ai;
    sum2 += (ai + zi) * (ai + zi);
  }
  // Coordinates saturate beyond radius ~37; only then is the stored gap used.
  long double ga = 1.0L - a2;
  if (!(ga > 0.0L)) ga = a.gap();
  const long double den = sum2 + ga * z.gap();
  const long double ca = (sum2 + ga) / den;
  const long double cz = ga / den;
  Coords out(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<double>(ca * a[i] + cz * z[i]);
  }
  return Point::raw(std::move(out), static_cast<double>(ga * z.gap() / den));
}

GeodesicPoint geodesic_point(const Point& x, const Point& y, double t) {
  require_same_dim(x, y, "geodesic_point");
  if (!std::isfinite(t)) throw DomainError("geodesic_point: t must be finite");
  const double d = distance(x, y);
  if (d == 0.0) throw DegenerateGeodesicError("geodesic_point: endpoints coincide");
  // Pull y back to the origin frame, where geodesics through 0 are diameters.
  const Point v = mobius_translate(x.negated(), y);
  const Point p = Point::from_polar(v.coords(), t);
  const double slack = 1e-12 * std::max(1.0, d);
  return {mobius_translate(x, p), t < -slack || t > d + slack};
}

Coords sphere_inversion(std::span<const double> x0, double alpha, std::span<const double> x) {
  if (x0.size() != x.size()) throw UsageError("sphere_inversion: dimension mismatch");
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - x0[i]) * (x[i] - x0[i]);
  if (!(r2 > 0.0)) throw DomainError("sphere_inversion: point at the center");
  Coords out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * (x[i] - x0[i]) / r2 + x0[i];
  return out;
}

Point boundary_orthogonal_inversion(const Point& a, const Point& z) {
  require_same_dim(a, z, "boundary_orthogonal_inversion");
  const double a2 = dot(a.coords(), a.coords());
  if (!(a2 > 0.0)) throw DomainError("boundary_orthogonal_inversion: a must be nonzero");
  Coords x0(a.coords().begin(), a.coords().end());
  for (double& v : x0) v /= a2;
  const Coords w = sphere_inversion(view(x0), a.gap() / a2, z.coords());
  return Point::from_coords(view(w));
}

OrthogonalMap OrthogonalMap::identity(int dim) {
  if (dim < 2) throw UsageError("orthogonal map: dimension must be >= 2");
  OrthogonalMap q(dim);
  for (int i = 0; i < dim; ++i) q.m_[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return q;
}

OrthogonalMap OrthogonalMap::reflection(std::span<const double> normal) {
  const int dim = static_cast<int>(normal.size());
  OrthogonalMap q = identity(dim);
  const double n2 = dot(normal, normal);
  if (!(n2 > 0.0)) throw DomainError("reflection: normal must be nonzero");
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      q.m_[static_cast<std::size_t>(i * dim + j)] -= 2.0 * normal[i] * normal[j] / n2;
    }
  }
  return q;
}

OrthogonalMap OrthogonalMap::then(const OrthogonalMap& next) const {
  if (next.dim_ != dim_) throw UsageError("orthogonal map: dimension mismatch");
  OrthogonalMap out(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim_; ++k) {
        acc += next.m_[static_cast<std::size_t>(i * dim_ + k)] * m_[static_cast<std::size_t>(k * dim_ + j)];
      }
      out.m_[static_cast<std::size_t>(i * dim_ + j)] = acc;
    }
  }
  return out;
}

Point OrthogonalMap::apply(const Point& z) const {
  if (z.dim() != dim_) throw UsageError("orthogonal map: dimension mismatch");
  Coords out(static_cast<std::size_t>(dim_), 0.0);
  for (int i = 0; i < dim_; ++i) {
    double acc = 0.0;
    for (int j = 0; j < dim_; ++j) acc += m_[static_cast<std::size_t>(i * dim_ + j)] * z[j];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return Point::raw(std::move(out), z.gap());
}

double OrthogonalMap::orthogonality_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim_; ++k) {
        acc += m_[static_cast<std::size_t>(k * dim_ + i)] * m_[static_cast<std::size_t>(k * dim_ + j)];
      }
      worst = std::max(worst, std::fabs(acc - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

namespace {

IntersectionOutcome classify(double r, double s, double d, const Point& first, const Point& second,
                             int n) {
  if (!(r >= 0.0) || !(s >= 0.0) || !(d >= 0.0)) {
    throw DomainError("intersection_geometry: radii and distance must be >= 0");
  }
  if (d < std::fabs(r - s)) return {BallRelation::Contained, std::nullopt};
  if (d > r + s) return {BallRelation::Disjoint, std::nullopt};
  IntersectionGeometry g{0.5 * (r + s - d), first, 0.5 * (n - 1) * (r + s - d)};
  if (d > 0.0) g.m = geodesic_point(first, second, 0.5 * (s + d - r)).point;
  return {BallRelation::Overlapping, std::move(g)};
}

}  // namespace

IntersectionOutcome intersection_geometry(const BallSpec& first, const BallSpec& second) {
  first.validate();
  second.validate();
  const double d = distance(first.center, second.center);
  return classify(second.radius, first.radius, d, first.center, second.center, first.dim());
}

IntersectionOutcome intersection_geometry(int n, double r, double s, double d) {
  if (n < 2) throw UsageError("intersection_geometry: n must be >= 2");
  if (!(r >= 0.0) || !(s >= 0.0) || !(d >= 0.0) || !std::isfinite(d)) {
    throw DomainError("intersection_geometry: radii and distance must be >= 0");
  }
  return classify(r, s, d, Point::origin(n), Point::on_axis(n, d), n);
}

}  // namespace hypmax
