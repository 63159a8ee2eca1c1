#include <benchmark/benchmark.h>

#include <vector>

#include "fspec/cyclotomic.hpp"
#include "fspec/dynamics.hpp"
#include "fspec/spectrum.hpp"
#include "fspec/tower.hpp"
#include "fspec/triple.hpp"

using namespace fspec;

namespace {

HadamardTriple jp() { return {IntMatrix::scalar(4), DigitSet{0, 2}, DigitSet{0, 1}}; }

HadamardTriple quasi() {
  return {IntMatrix::from_rows({{4, 0}, {1, 2}}), DigitSet(2, {{0, 0}, {0, 3}, {1, 0}, {1, 3}}),
          DigitSet(2, {{0, 0}, {2, 0}, {0, 1}, {2, 1}})};
}

HadamardTriple shear() {
  return {IntMatrix::from_rows({{2, 1}, {0, 2}}), DigitSet(2, {{0, 0}, {3, 0}, {0, 1}, {3, 1}}),
          DigitSet(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}})};
}

void BM_MuHatDouble(benchmark::State& st) {
  auto t = jp();
  MuHatEvaluator ev(t.r(), t.b(), 1e-12);
  double x = 0.1;
  for (auto _ : st) {
    double xi[1] = {x};
    benchmark::DoNotOptimize(ev(std::span<const double>(xi, 1)));
    x += 1.37;
  }
}
BENCHMARK(BM_MuHatDouble);

void BM_MuHatRational(benchmark::State& st) {
  auto t = quasi();
  MuHatEvaluator ev(t.r(), t.b());
  std::int64_t k = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(ev.at(RatVec{Rational(k % 17, 7), Rational(k % 5, 3)}));
    ++k;
  }
}
BENCHMARK(BM_MuHatRational);

void BM_VanishingSum(benchmark::State& st) {
  std::vector<Rational> ph{Rational(0), Rational(1, 6), Rational(1, 2), Rational(5, 6), Rational(1, 3),
                           Rational(2, 3)};
  for (auto _ : st) benchmark::DoNotOptimize(root_of_unity_sum_vanishes(ph));
}
BENCHMARK(BM_VanishingSum);

void BM_ProductTriple(benchmark::State& st) {
  auto t = quasi();
  for (auto _ : st) benchmark::DoNotOptimize(product_triple(t, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_ProductTriple)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_ExtremeCycles(benchmark::State& st) {
  TransitionSystem ts(shear());
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_extreme_cycles(ts));
}
BENCHMARK(BM_ExtremeCycles)->Unit(benchmark::kMillisecond);

void BM_Orthogonality(benchmark::State& st) {
  auto t = jp();
  MuHatEvaluator ev(t.r(), t.b());
  auto lv = canonical_levels(t, static_cast<int>(st.range(0))).levels.back();
  for (auto _ : st) benchmark::DoNotOptimize(orthogonality_check(ev, lv));
}
BENCHMARK(BM_Orthogonality)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

void BM_Completion(benchmark::State& st) {
  HadamardTriple t(IntMatrix::scalar(2), DigitSet{0, 1}, DigitSet{0, 1});
  MuHatEvaluator ev(t.r(), t.b());
  for (auto _ : st) benchmark::DoNotOptimize(complete_spectrum(ev, t));
}
BENCHMARK(BM_Completion)->Unit(benchmark::kMillisecond);

void BM_Selection(benchmark::State& st) {
  AffinePair mt(IntMatrix::scalar(3), DigitSet{0, 2});
  auto p = make_selection_problem(mt, 2);
  for (auto _ : st) {
    switch (st.range(0)) {
      case 0: benchmark::DoNotOptimize(exhaustive_select(p)); break;
      case 1: benchmark::DoNotOptimize(heuristic_select(p, SelectionMethod::Greedy)); break;
      default: benchmark::DoNotOptimize(heuristic_select(p, SelectionMethod::RandomSwap, 7)); break;
    }
  }
}
BENCHMARK(BM_Selection)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Tower(benchmark::State& st) {
  std::vector<TowerSpec> specs(3, TowerSpec{2, 100, 1});
  for (auto _ : st) benchmark::DoNotOptimize(build_tower(specs));
}
BENCHMARK(BM_Tower);

}  // namespace

BENCHMARK_MAIN();
