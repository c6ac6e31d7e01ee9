#pragma once

// Poincare ball model of hyperbolic n-space with curvature -1.
//
// Distances follow d(x, y) = arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))), the
// normalization under which the volume of a ball of radius r is
// Omega_n * int_0^r sinh^(n-1)(t) dt.

#include <optional>
#include <span>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace hypmax {

using Coords = boost::container::small_vector<double, 6>;

inline std::span<const double> view(const Coords& c) { return {c.data(), c.size()}; }

/// Point of the open unit ball.
///
/// Besides the coordinates, a point carries its gap 1 - |x|^2, tracked exactly
/// through constructors and isometries. Near the boundary the gap is the
/// quantity that loses precision first when recomputed from coordinates, and
/// every distance formula divides by it.
class Point {
 public:
  static Point origin(int dim);
  /// Throws DomainError unless |coords| < 1, UsageError if dim < 2.
  static Point from_coords(std::span<const double> coords);
  /// Point at hyperbolic distance `radius` from the origin along a unit
  /// direction. A negative radius walks the opposite direction.
  static Point from_polar(std::span<const double> direction, double radius);
  /// from_polar along the first coordinate axis.
  static Point on_axis(int dim, double radius);
  /// Trusts the caller that `gap` is 1 - |coords|^2 to working precision.
  static Point raw(Coords coords, double gap) { return Point(std::move(coords), gap); }

  int dim() const { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const { return {coords_.data(), coords_.size()}; }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  double gap() const { return gap_; }
  double norm() const;
  /// Hyperbolic distance to the origin.
  double radius() const;
  Point negated() const;

  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

 private:
  Point(Coords coords, double gap) : coords_(std::move(coords)), gap_(gap) {}
  Coords coords_;
  double gap_ = 1.0;
};

struct BallSpec {
  Point center;
  double radius = 0.0;

  void validate() const;
  int dim() const { return center.dim(); }
  bool contains(const Point& p, double tolerance = 0.0) const;
};

/// Slack used by every membership test against a hyperbolic ball.
inline constexpr double kBoundaryTolerance = 1e-6;

double distance(const Point& x, const Point& y);

/// The arctanh formula printed with the ball model in the source material.
/// It equals half of distance(0, y) from the origin and is kept only for
/// comparison; nothing else in the library uses it.
double appendix_distance(const Point& x, const Point& y);

/// Euclidean (n-1)-volume of the unit sphere S^(n-1).
double sphere_area(int n);
/// int_0^r sinh^k(t) dt and its logarithm.
double sinh_power_integral(int k, double r);
double log_sinh_power_integral(int k, double r);

double ball_volume(int n, double r);
double log_ball_volume(int n, double r);

/// Side opposite the angle gamma in a geodesic triangle with sides a, b.
double law_of_cosines(double a, double b, double gamma);

struct GeodesicPoint {
  Point point;
  bool extrapolated = false;  // t outside [0, distance(x, y)]
};

/// Point at signed distance t from x on the geodesic through x and y.
GeodesicPoint geodesic_point(const Point& x, const Point& y, double t);

/// Isometry carrying the origin to a (Mobius addition a (+) z). Its inverse
/// is mobius_translate(a.negated(), .).
Point mobius_translate(const Point& a, const Point& z);

/// Inversion x -> alpha (x - x0)/|x - x0|^2 + x0 on raw coordinates.
Coords sphere_inversion(std::span<const double> x0, double alpha, std::span<const double> x);

/// Inversion in the sphere centered at a/|a|^2 that meets the boundary
/// orthogonally; it swaps 0 and a. Requires a != 0.
Point boundary_orthogonal_inversion(const Point& a, const Point& z);

/// Element of O(n) stored as a dense row-major matrix.
class OrthogonalMap {
 public:
  static OrthogonalMap identity(int dim);
  /// Reflection through the hyperplane orthogonal to `normal`.
  static OrthogonalMap reflection(std::span<const double> normal);
  OrthogonalMap then(const OrthogonalMap& next) const;

  int dim() const { return dim_; }
  Point apply(const Point& z) const;
  /// max |Q^T Q - I|, for checking.
  double orthogonality_defect() const;

 private:
  explicit OrthogonalMap(int dim) : dim_(dim), m_(static_cast<std::size_t>(dim * dim), 0.0) {}
  int dim_;
  std::vector<double> m_;
};

enum class BallRelation { Overlapping, Contained, Disjoint };

/// Geometry of B(first, s) and B(second, r) whose intersection has positive
/// measure: rho0 = (r + s - d)/2 and the point m on the segment with
/// d(first, m) = (s + d - r)/2, so that B(m, rho0) lies in both balls.
struct IntersectionGeometry {
  double rho0 = 0.0;
  Point m;
  /// (n - 1) * (r + s - d) / 2, the log of the volume bound's exponential.
  double bound_log = 0.0;
};

struct IntersectionOutcome {
  BallRelation relation = BallRelation::Overlapping;
  std::optional<IntersectionGeometry> geometry;  // set iff Overlapping
};

/// `first` has radius s, `second` radius r.
IntersectionOutcome intersection_geometry(const BallSpec& first, const BallSpec& second);
/// Canonical frame: first center at the origin, second at distance d on the
/// first axis.
IntersectionOutcome intersection_geometry(int n, double r, double s, double d);

}  // namespace hypmax
