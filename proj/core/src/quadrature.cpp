#include "hypmax/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hypmax/errors.hpp"

namespace hypmax {

namespace {

GaussLegendreRule build_rule(int points) {
  GaussLegendreRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[points - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[points - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int points) {
  if (points < 1) throw UsageError("gauss_legendre: need at least one point");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
  return it->second;
}

void QuadratureSpec::validate() const {
  if (radial_nodes < 8 || angular_nodes < 8) {
    throw UsageError("quadrature: node counts must be >= 8");
  }
  if (angular_panels < 1 || !(panel_width > 0.0)) {
    throw UsageError("quadrature: panel layout must be positive");
  }
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec q = *this;
  q.radial_nodes *= 2;
  q.angular_nodes *= 2;
  return q;
}

std::vector<QuadNode> composite_nodes(double a, double b, std::span<const double> breakpoints,
                                      int points, double max_width) {
  std::vector<QuadNode> out;
  if (!(b > a)) return out;
  std::vector<double> cuts;
  cuts.reserve(breakpoints.size() + 2);
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const GaussLegendreRule& rule = gauss_legendre(points);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width - 1e-12)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double pa = lo + p * width;
      const double half = 0.5 * width;
      const double mid = pa + half;
      for (int i = 0; i < points; ++i) {
        out.push_back({mid + half * rule.nodes[i], half * rule.weights[i]});
      }
    }
  }
  return out;
}

}  // namespace hypmax
