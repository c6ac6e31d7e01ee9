#include <benchmark/benchmark.h>

#include "hypmax/geometry.hpp"
#include "hypmax/inequalities.hpp"
#include "hypmax/measure_ops.hpp"
#include "hypmax/sampling.hpp"
#include "hypmax/weights.hpp"

using namespace hypmax;

namespace {

void BM_Distance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(1, 0);
  const Point x = sample_ball(rng, BallSpec{Point::origin(n), 5.0}, 1).front();
  const Point y = sample_ball(rng, BallSpec{Point::origin(n), 5.0}, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(distance(x, y));
}
BENCHMARK(BM_Distance)->Arg(2)->Arg(5);

void BM_MobiusTranslate(benchmark::State& state) {
  RngStream rng(2, 0);
  const Point a = sample_ball(rng, BallSpec{Point::origin(3), 3.0}, 1).front();
  const Point z = sample_ball(rng, BallSpec{Point::origin(3), 3.0}, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(mobius_translate(a, z));
}
BENCHMARK(BM_MobiusTranslate);

// Off-center sampling is the inner loop of the intersection scans.
void BM_SampleOffCenterBall(benchmark::State& state) {
  RngStream rng(3, 0);
  const BallSampler sampler(BallSpec{Point::on_axis(2, 4.0), static_cast<double>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(sampler(rng));
}
BENCHMARK(BM_SampleOffCenterBall)->Arg(2)->Arg(10);

void BM_AvgRadialIndicator(benchmark::State& state) {
  const RadialFunction f = RadialFunction::indicator(RadialSet::ball(1.0));
  const QuadratureSpec q;
  for (auto _ : state) benchmark::DoNotOptimize(avg_radial(f, 3.0, 3.5, 2, q));
}
BENCHMARK(BM_AvgRadialIndicator);

void BM_MaximalValue(benchmark::State& state) {
  const RadialFunction f = RadialFunction::indicator(RadialSet::annulus(5));
  const RadiusGrid grid = RadiusGrid::standard();
  const QuadratureSpec q;
  for (auto _ : state) benchmark::DoNotOptimize(maximal_value(f, 2.0, MaximalMode::Full, grid, 2, q));
}
BENCHMARK(BM_MaximalValue)->Unit(benchmark::kMillisecond);

void BM_Lemma31Check(benchmark::State& state) {
  RngStream rng(4, 0);
  SeqPair sp;
  for (int i = 0; i < state.range(0); ++i) {
    sp.c.push_back(std::exp(3.0 * rng.normal()));
    sp.d.push_back(std::exp(3.0 * rng.normal()));
  }
  sp.p = 2.0;
  sp.r = 3;
  for (auto _ : state) benchmark::DoNotOptimize(lemma31_check(sp));
}
BENCHMARK(BM_Lemma31Check)->Arg(10)->Arg(50);

void BM_Condition16Cell(benchmark::State& state) {
  const WeightSpec w = WeightSpec::w_gamma(-1.0);
  const QuadratureSpec q;
  const Condition16Args a{.j = 4, .l = 6, .r = 3, .p = 2.0, .delta = -1.0, .n = 2};
  for (auto _ : state) benchmark::DoNotOptimize(condition16_cell_log_ratio(w, a, q));
}
BENCHMARK(BM_Condition16Cell);

}  // namespace

BENCHMARK_MAIN();
