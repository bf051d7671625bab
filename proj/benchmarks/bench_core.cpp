#include <benchmark/benchmark.h>

#include "tancone/cones.hpp"
#include "tancone/expr.hpp"
#include "tancone/jet.hpp"
#include "tancone/setmodels.hpp"
#include "tancone/taylor.hpp"

using namespace tancone;

namespace {

const Vec kOrigin{0.0, 0.0};

void BM_ParseExpression(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse("sin(x1 * x2) * exp(x3) + x1^3 * x3 - x2^4 / (2 + x1^2)", 3));
}
BENCHMARK(BM_ParseExpression);

void BM_EvalOnArc(benchmark::State& state) {
  const auto order = static_cast<std::size_t>(state.range(0));
  const Expr f = parse("sin(x1 * x2) * exp(x3) + x1^3 * x3 - x2^4 / (2 + x1^2)", 3);
  Arc arc{{0.3, -0.2, 0.1}, {}, std::nullopt};
  for (std::size_t s = 0; s < order; ++s) arc.directions.push_back({1.0, 0.5 * s, -0.25});
  for (auto _ : state) benchmark::DoNotOptimize(eval_on_arc(f, arc, order));
}
BENCHMARK(BM_EvalOnArc)->Arg(2)->Arg(4)->Arg(6);

void BM_SumOrderK(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Expr f = parse("x1^4 - x1 * x2^3 + x3^2 * x1 + x2", 3);
  const std::vector<Vec> H(static_cast<std::size_t>(k - 1), Vec{0.5, -1.0, 0.25});
  const Vec w{1.0, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(sum_order_k(f, {0.1, 0.2, 0.3}, H, w));
}
BENCHMARK(BM_SumOrderK)->Arg(2)->Arg(3)->Arg(4);

void BM_EnumerateMultiindices(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_multiindices(s));
}
BENCHMARK(BM_EnumerateMultiindices)->Arg(4)->Arg(8);

void BM_CuspDistance(benchmark::State& state) {
  const SetDesc cusp = benchmark_set("cusp");
  const Vec x{0.01, -0.003};
  for (auto _ : state) benchmark::DoNotOptimize(distance(cusp, x));
}
BENCHMARK(BM_CuspDistance);

void BM_CuspFirstOrderScan(benchmark::State& state) {
  const SetDesc cusp = benchmark_set("cusp");
  const DirectionCollection none{kOrigin, {}};
  for (auto _ : state) benchmark::DoNotOptimize(sample_cone(cusp, none, {SliceKind::FirstOrder}, 32));
}
BENCHMARK(BM_CuspFirstOrderScan)->Unit(benchmark::kMillisecond);

void BM_CuspInfinityMember(benchmark::State& state) {
  const SetDesc cusp = benchmark_set("cusp");
  const DirectionCollection h{kOrigin, {{0.0, 1.0}}};
  for (auto _ : state) benchmark::DoNotOptimize(member_slice(cusp, h, {1.0, 0.0}, {SliceKind::Infinity}));
}
BENCHMARK(BM_CuspInfinityMember)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
