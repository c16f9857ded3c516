#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bkiexp/bki.hpp"
#include "bkiexp/gp_baseline.hpp"

namespace {

using namespace bkiexp;

struct Problem {
  TrainingSet train;
  std::vector<Action> queries;
};

Problem make_problem(int n, int nq, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 12.0);
  std::uniform_real_distribution<double> mi(0.0, 40.0);
  Problem p;
  for (int i = 0; i < n; ++i) p.train.add(Action(pos(rng), pos(rng), 0.0), mi(rng));
  for (int i = 0; i < nq; ++i) p.queries.emplace_back(pos(rng), pos(rng), 0.0);
  return p;
}

void BM_BkiPredict(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = make_problem(n, 8 * n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bki_predict(p.train, p.queries, {}, {}));
  state.SetComplexityN(n);
}
BENCHMARK(BM_BkiPredict)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void BM_GpFitPredict(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = make_problem(n, 8 * n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gp_predict(gp_fit(p.train, {}, 1e-4), p.queries));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GpFitPredict)->RangeMultiplier(2)->Range(50, 400)->Complexity();

void BM_GpFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = make_problem(n, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gp_fit(p.train, {}, 1e-4));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GpFit)->RangeMultiplier(2)->Range(50, 400)->Complexity(benchmark::oNCubed);

// One BO epoch at the sizes used during exploration.
void BM_EpochBki(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = make_problem(n + n / 2, 8 * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bki_predict(p.train, p.queries, {}, {}));
}
BENCHMARK(BM_EpochBki)->Arg(30)->Arg(60);

void BM_EpochGp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = make_problem(n + n / 2, 8 * n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(gp_predict(gp_fit(p.train, {}, 1e-4), p.queries));
}
BENCHMARK(BM_EpochGp)->Arg(30)->Arg(60);

}  // namespace
