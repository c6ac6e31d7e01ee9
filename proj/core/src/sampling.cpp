#include "hypmax/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypmax/logmath.hpp"
#include "hypmax/quadrature.hpp"

namespace hypmax {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t shard) : seed_(seed), shard_(shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32),
                    0x68797078u};
  engine_.seed(seq);
}

void RngStream::unit_vector(int n, double* out) {
  if (n == 2) {
    const double a = 2.0 * std::numbers::pi * uniform();
    out[0] = std::cos(a);
    out[1] = std::sin(a);
    return;
  }
  double len2 = 0.0;
  do {
    len2 = 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] = normal();
      len2 += out[i] * out[i];
    }
  } while (len2 < 1e-300);
  const double inv = 1.0 / std::sqrt(len2);
  for (int i = 0; i < n; ++i) out[i] *= inv;
}

McEstimate merge(const McEstimate& a, const McEstimate& b) {
  if (a.n_samples == 0) return b;
  if (b.n_samples == 0) return a;
  const double total = static_cast<double>(a.n_samples + b.n_samples);
  const double wa = a.n_samples / total;
  const double wb = b.n_samples / total;
  return {wa * a.value + wb * b.value,
          std::sqrt(wa * wa * a.std_error * a.std_error + wb * wb * b.std_error * b.std_error),
          a.n_samples + b.n_samples};
}

McEstimate merge(const std::vector<McEstimate>& parts) {
  McEstimate acc;
  for (const McEstimate& p : parts) acc = merge(acc, p);
  return acc;
}

namespace {

void check_u(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("radial_inverse_cdf: u must lie in [0, 1]");
}

// Density is ~ e^((n-1)(t - hi)) near the top of a wide interval.
double initial_guess(int k, double lo, double hi, double u) {
  double t = hi > lo + 2.0 && u > 0.0 ? hi + std::log(u) / k : lo + u * (hi - lo);
  return std::clamp(t, lo, hi);
}

template <class G, class D>
double newton_bisect(G&& g, D&& dg, double a, double b, double t) {
  for (int iter = 0; iter < 200 && b - a > 1e-12; ++iter) {
    const double v = g(t);
    if (v == 0.0) return t;
    if (v > 0.0) b = t; else a = t;
    const double slope = dg(t);
    double next = slope > 0.0 ? t - v / slope : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::fabs(next - t) < 1e-13 * std::max(1.0, t)) return next;
    t = next;
  }
  return 0.5 * (a + b);
}

}  // namespace

double radial_inverse_cdf(int n, double r, double u) { return radial_inverse_cdf(n, 0.0, r, u); }

double radial_inverse_cdf(int n, double lo, double hi, double u) {
  if (n < 2) throw UsageError("radial_inverse_cdf: n must be >= 2");
  if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("radial_inverse_cdf: need 0 <= lo < hi");
  check_u(u);
  if (u == 0.0) return lo;
  if (u == 1.0) return hi;
  if (n == 2) {
    // CDF is linear in cosh t - 1 = 2 sinh^2(t/2).
    const double a = std::sinh(0.5 * lo);
    const double b = std::sinh(0.5 * hi);
    const double t = 2.0 * std::asinh(std::sqrt((1.0 - u) * a * a + u * b * b));
    return std::clamp(t, lo, hi);
  }
  const int k = n - 1;
  if (hi <= 30.0) {
    // Linear domain: values stay below e^(4 * 30) for n <= 5.
    const double i_lo = sinh_power_integral(k, lo);
    const double target = i_lo + u * (sinh_power_integral(k, hi) - i_lo);
    return newton_bisect([&](double t) { return sinh_power_integral(k, t) - target; },
                         [&](double t) { return std::pow(std::sinh(t), k); }, lo, hi,
                         initial_guess(k, lo, hi, u));
  }
  // Relative to I(hi) so that large annuli stay in range.
  const double l_hi = log_sinh_power_integral(k, hi);
  const double l_lo = lo > 0.0 ? log_sinh_power_integral(k, lo) : kNegInf;
  const double target = std::exp(l_lo - l_hi) - u * std::expm1(l_lo - l_hi);
  return newton_bisect(
      [&](double t) { return std::exp(log_sinh_power_integral(k, t) - l_hi) - target; },
      [&](double t) { return std::exp(k * log_sinh(t) - l_hi); }, lo, hi,
      initial_guess(k, lo, hi, u));
}

BallSampler::BallSampler(const BallSpec& ball) : ball_(ball) {
  ball_.validate();
  centered_ = ball_.center.norm() == 0.0;
}

Point BallSampler::operator()(RngStream& rng) const {
  const int n = ball_.dim();
  double dir[16];
  if (n > 16) throw UsageError("BallSampler: dimension too large");
  rng.unit_vector(n, dir);
  const double t = ball_.radius > 0.0 ? radial_inverse_cdf(n, ball_.radius, rng.uniform()) : 0.0;
  const Point p = Point::from_polar({dir, static_cast<std::size_t>(n)}, t);
  return centered_ ? p : mobius_translate(ball_.center, p);
}

std::vector<Point> sample_ball(RngStream& rng, const BallSpec& ball, int count) {
  if (count < 1) throw UsageError("sample_ball: count must be >= 1");
  const BallSampler sampler(ball);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(sampler(rng));
  return out;
}

std::vector<Point> sample_annulus(RngStream& rng, int n, int j, int count) {
  if (j < 1) throw UsageError("sample_annulus: j must be >= 1");
  if (count < 1) throw UsageError("sample_annulus: count must be >= 1");
  if (n < 2 || n > 16) throw UsageError("sample_annulus: unsupported dimension");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  const double lo = j - 1.0;
  const double hi = j;
  const double below_hi = std::nextafter(hi, 0.0);
  double dir[16];
  for (int i = 0; i < count; ++i) {
    rng.unit_vector(n, dir);
    double t = radial_inverse_cdf(n, lo, hi, rng.uniform());
    t = std::min(t, below_hi);
    out.push_back(Point::from_polar({dir, static_cast<std::size_t>(n)}, t));
  }
  return out;
}

}  // namespace hypmax
