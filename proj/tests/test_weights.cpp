#include <doctest.h>

#include <cmath>

#include "hypmax/errors.hpp"
#include "hypmax/weights.hpp"

using namespace hypmax;

namespace {

const QuadratureSpec kQ{};

}  // namespace

TEST_CASE("weight spec parsing round-trips") {
  for (const char* text : {"const", "const:2.5", "gamma:0.5", "gamma:-1", "power:gamma:0.5:-2",
                           "power:const:3:0.25"}) {
    const WeightSpec w = WeightSpec::parse(text);
    CHECK(WeightSpec::parse(w.to_string()).to_string() == w.to_string());
  }
  CHECK(WeightSpec::parse("power:gamma:0.5:-2").base().gamma() == 0.5);
  CHECK(WeightSpec::parse("power:power:gamma:1:2:0.5").form() == WeightSpec::Form::WGamma);
  CHECK_THROWS_AS(WeightSpec::parse("gamma:1.5"), UsageError);
  CHECK_THROWS_AS(WeightSpec::parse("gamma:abc"), UsageError);
  CHECK_THROWS_AS(WeightSpec::parse("power:gamma:0.5"), UsageError);
  CHECK_THROWS_AS(WeightSpec::parse("banana"), UsageError);
  CHECK_THROWS_AS(WeightSpec::parse("const:-1"), UsageError);
}

TEST_CASE("dual weight") {
  const WeightSpec w = WeightSpec::w_gamma(0.5);
  const double p = 3.0, pp = p / (p - 1.0);
  const WeightSpec sigma = dual_weight(w, p);
  CHECK(sigma.exponent() == doctest::Approx(-0.5));
  // (w^(1-p'))^(1-p) = w
  CHECK(dual_weight(sigma, pp).to_string() == w.to_string());
  for (double t : {0.0, 0.7, 4.0, 25.0}) {
    CHECK(sigma.log_eval(t, 3) == doctest::Approx(-0.5 * w.log_eval(t, 3)));
  }
  CHECK_THROWS_AS(dual_weight(w, 1.0), UsageError);
}

TEST_CASE("w_{1-p} tends to w_1 as p -> 0") {
  for (double t : {0.5, 3.0, 10.0}) {
    const double target = WeightSpec::w_gamma(1.0).log_eval(t, 2);
    CHECK(WeightSpec::w_gamma(1.0 - 1e-9).log_eval(t, 2) == doctest::Approx(target).epsilon(1e-7));
  }
}

TEST_CASE("A_p products are at least one") {
  const WeightSpec one = WeightSpec::constant();
  CHECK(ap_global_ratio(one, 5.0, 2.0, 2, kQ) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ap_global_ratio(WeightSpec::constant(7.0), 3.0, 1.5, 3, kQ) ==
        doctest::Approx(1.0).epsilon(1e-12));
  for (double gamma : {-1.0, 0.5, 1.0}) {
    const WeightSpec w = WeightSpec::w_gamma(gamma);
    for (double r : {0.5, 2.0, 8.0}) CHECK(ap_global_ratio(w, r, 2.0, 2, kQ) >= 1.0 - 1e-12);
    for (double tau : {0.0, 1.0, 6.0}) {
      const BallSpec b{Point::on_axis(2, tau), 1.0};
      const double v = ap_loc_ratio(w, b, 2.0, kQ);
      CHECK(v >= 1.0 - 1e-12);
      CHECK(v < 10.0);
    }
  }
  CHECK_THROWS_AS(ap_loc_ratio(one, BallSpec{Point::origin(2), 1.5}, 2.0, kQ), UsageError);
  CHECK_THROWS_AS(ap_global_ratio(one, 1.0, 1.0, 2, kQ), UsageError);
}

TEST_CASE("condition16 preconditions") {
  const WeightSpec one = WeightSpec::constant();
  Condition16Args a{.j = 1, .l = 4, .r = 2, .p = 2.0, .delta = 0.0, .n = 2};
  CHECK_THROWS_AS(condition16_cell_log_ratio(one, a, kQ), PreconditionError);
  a.l = 3;
  CHECK_NOTHROW(condition16_cell_log_ratio(one, a, kQ));
  CHECK_THROWS_AS(condition16_log_ratio(one, a, 1.0, kQ), DomainError);
  a.delta = 1.0;
  CHECK_THROWS_AS(condition16_cell_log_ratio(one, a, kQ), UsageError);
}

TEST_CASE("condition16 numerator never exceeds the annulus") {
  const WeightSpec one = WeightSpec::constant();
  for (int n : {2, 3}) {
    for (int l : {1, 2, 4}) {
      Condition16Args a{.j = 2, .l = l, .r = 3, .p = 2.0, .delta = 0.5, .n = n};
      const double den = (n - 1) * (a.r + l - a.j) * (a.p - a.delta) / 2.0 + (n - 1) * a.r * a.delta;
      const double shell = std::log(ball_volume(n, l) - ball_volume(n, l - 1));
      for (double tau : {1.0, 1.5, 2.0 - 1e-9}) {
        CHECK(condition16_log_ratio(one, a, tau, kQ) + den <= shell + 1e-10);
      }
    }
  }
  // Annulus entirely inside the ball: the whole shell is captured.
  Condition16Args a{.j = 1, .l = 1, .r = 5, .p = 2.0, .delta = 0.0, .n = 2};
  const double den = (a.r + a.l - a.j) * a.p / 2.0;
  CHECK(condition16_log_ratio(one, a, 0.0, kQ) + den ==
        doctest::Approx(std::log(ball_volume(2, 1.0))).epsilon(1e-10));
}

TEST_CASE("condition13 sides") {
  const WeightSpec one = WeightSpec::constant();
  const Condition13Args a{.r = 1, .alpha = 1.0, .beta = 0.5, .p = 2.0, .n = 2};
  const RadialSet e = RadialSet::ball(1.0);
  const RadialSet f = RadialSet::from_intervals({{2.0, 3.0}});
  CHECK(condition13_sides(one, RadialSet{}, f, a, kQ).lhs_log == kNegInf);

  // A_r is self-adjoint, so the unweighted pairing is symmetric.
  const RadialFunction wr = RadialFunction::constant(1.0);
  CHECK(log_set_pairing(wr, e, f, 2, 2, kQ) ==
        doctest::Approx(log_set_pairing(wr, f, e, 2, 2, kQ)).epsilon(1e-4));
  // A_r chi_E <= 1.
  CHECK(log_set_pairing(RadialFunction::constant(1.0), e, e, 3, 2, kQ) <=
        std::log(ball_volume(2, 1.0)) + 1e-12);

  // For w = 1 and E = F the ratio falls as r grows.
  double prev = INFINITY;
  for (int r = 1; r <= 8; ++r) {
    const Condition13Args ar{.r = r, .alpha = 1.0, .beta = 1.0, .p = 2.0, .n = 2};
    const IneqSides s = condition13_sides(one, RadialSet::ball(2.0), RadialSet::ball(2.0), ar, kQ);
    CHECK(s.ratio_log <= prev + 1e-12);
    prev = s.ratio_log;
  }
  CHECK_THROWS_AS(condition13_sides(one, e, f, {.r = 1, .alpha = 2.0, .beta = 0.5, .p = 2.0, .n = 2}, kQ),
                  UsageError);
  CHECK_THROWS_AS(condition13_sides(one, e, f, {.r = 0, .alpha = 1.0, .beta = 0.5, .p = 2.0, .n = 2}, kQ),
                  UsageError);
}

TEST_CASE("condition13 Monte Carlo agrees with quadrature") {
  const WeightSpec w = WeightSpec::w_gamma(0.5);
  const Condition13Args a{.r = 1, .alpha = 1.0, .beta = 0.5, .p = 2.0, .n = 2};
  const RadialSet e = RadialSet::ball(1.0);
  const RadialSet f = RadialSet::ball(1.5);
  const IneqSides exact = condition13_sides(w, e, f, a, kQ);
  RngStream rng(11, 0);
  const IneqSides mc = condition13_sides_mc(w, Region{e}, Region{f}, a, rng, 20000, 20);
  CHECK(std::exp(mc.lhs_log - exact.lhs_log) == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::exp(mc.rhs_log - exact.rhs_log) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("condition report") {
  ConditionReport rep{.condition = "eq16"};
  rep.add({.params = {{"j", 1}}, .lhs_log = 0.0, .rhs_log = 0.0, .ratio_log = -1.0});
  rep.add({.params = {{"j", 2}}, .lhs_log = 0.0, .rhs_log = 0.0, .ratio_log = 0.5});
  rep.finalize(1.0);
  CHECK(rep.max_ratio_log == 0.5);
  CHECK(rep.pass);
  rep.finalize(0.0);
  CHECK_FALSE(rep.pass);
}
