#include <benchmark/benchmark.h>

#include <random>

#include "ssm/ifs.hpp"
#include "ssm/inverse.hpp"
#include "ssm/measure_ops.hpp"
#include "ssm/parametric.hpp"

using namespace ssm;

namespace {

using Q = DyadicMeasure<Rational>;

Q random_measure(int resolution, int cells, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pos(0, (std::int64_t{1} << resolution) - 1);
  std::vector<DyadicCell<Rational>> raw;
  for (int i = 0; i < cells; ++i) raw.push_back({pos(rng), ratio(1, cells)});
  return Q(resolution, std::move(raw));
}

void BM_ConvolveExact(benchmark::State& state) {
  int cells = static_cast<int>(state.range(0));
  auto a = random_measure(16, cells, 1), b = random_measure(16, cells, 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
  state.SetComplexityN(cells);
}
BENCHMARK(BM_ConvolveExact)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_ConvolveFloat(benchmark::State& state) {
  int cells = static_cast<int>(state.range(0));
  auto a = to_float(random_measure(16, cells, 1)), b = to_float(random_measure(16, cells, 2));
  for (auto _ : state) benchmark::DoNotOptimize(convolve(a, b));
  state.SetComplexityN(cells);
}
BENCHMARK(BM_ConvolveFloat)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_EntropyFloat(benchmark::State& state) {
  auto mu = to_float(rasterize_self_similar(presets::cantor(), static_cast<int>(state.range(0)), 24).measure);
  for (auto _ : state) benchmark::DoNotOptimize(entropy(mu, static_cast<int>(state.range(0)) / 2));
}
BENCHMARK(BM_EntropyFloat)->Arg(12)->Arg(16)->Arg(20);

void BM_EntropyExact(benchmark::State& state) {
  auto mu = random_measure(14, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(exact_entropy(mu, 10));
}
BENCHMARK(BM_EntropyExact)->Arg(64)->Arg(512);

void BM_ComponentStats(benchmark::State& state) {
  auto mu = rasterize_self_similar(presets::cantor(), 14, 24).measure;
  for (auto _ : state) benchmark::DoNotOptimize(component_stats(mu, 0, 10, 3, 0.1));
}
BENCHMARK(BM_ComponentStats);

void BM_DeltaNRational(benchmark::State& state) {
  auto ifs = presets::bernoulli(Real(ratio(1, 3)));
  for (auto _ : state) benchmark::DoNotOptimize(delta_n(ifs, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DeltaNRational)->Arg(8)->Arg(12);

void BM_DeltaNGolden(benchmark::State& state) {
  auto field = NumberField::make(Polynomial({Rational(-1), Rational(1), Rational(1)}),
                                 Interval<Rational>(ratio(3, 5), ratio(7, 10)));
  auto ifs = presets::bernoulli(Real::generator(field));
  for (auto _ : state) benchmark::DoNotOptimize(delta_n(ifs, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DeltaNGolden)->Arg(8)->Arg(12);

void BM_CoverSublevel(benchmark::State& state) {
  Polynomial cheb({Rational(-1), Rational(0), Rational(18), Rational(0), Rational(-48), Rational(0), Rational(32)});
  Interval<Rational> J{Rational(-1), Rational(1)};
  for (auto _ : state) benchmark::DoNotOptimize(cover_sublevel(cheb, J, ratio(1, 1 << 20), ratio(1, 2), 1));
}
BENCHMARK(BM_CoverSublevel);

void BM_ExceptionalCover(benchmark::State& state) {
  auto fam = presets::bernoulli_family({ratio(1, 2), ratio(3, 5)});
  for (auto _ : state)
    benchmark::DoNotOptimize(exceptional_cover(fam, ratio(1, 100), static_cast<int>(state.range(0)), 1, ratio(1, 100)));
}
BENCHMARK(BM_ExceptionalCover)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
