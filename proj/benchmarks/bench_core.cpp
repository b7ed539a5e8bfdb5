#include <benchmark/benchmark.h>

#include <projektor/projektor.hpp>

using namespace projektor;

static void BM_WitnessSlownono(benchmark::State& state) {
  auto L = build_slownono(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(witness_search(L));
}
BENCHMARK(BM_WitnessSlownono)->Arg(10)->Arg(100)->Arg(1000);

static void BM_WitnessDenseRandom(benchmark::State& state) {
  CounterRng rng(1);
  const int n = static_cast<int>(state.range(0));
  std::vector<Subspace> L{random_subspace(n, n / 2, rng), random_subspace(n, n / 2, rng), random_subspace(n, n / 3, rng)};
  RegularityOptions ro;
  ro.compute_rate = false;
  for (auto _ : state) benchmark::DoNotOptimize(witness_search(L, ro));
}
BENCHMARK(BM_WitnessDenseRandom)->Arg(20)->Arg(80)->Arg(200);

static void BM_TrajectoryRandom(benchmark::State& state) {
  auto L = build_slownono(10);
  CounterRng rng(2);
  Vec z0 = random_unit(20, rng);
  for (auto _ : state) {
    auto r = run_until(L, Schedule::seeded_random(3, 7), z0, static_cast<std::size_t>(state.range(0)), 0.0);
    benchmark::DoNotOptimize(r.final_norm);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrajectoryRandom)->Arg(10000)->Arg(1000000);

static void BM_ClassifyJohnbio(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  std::vector<FourSet> V{{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 5, 6}};
  std::vector<int> alpha{1, 0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        classify_fourtuples([&](int t) { return build_johnbio(6, V, alpha, t); }, 6, {n_max / 4, n_max}));
  }
}
BENCHMARK(BM_ClassifyJohnbio)->Arg(20)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_Ladder(benchmark::State& state) {
  Vec u = Vec::Unit(2, 0), v = Vec::Unit(2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ladder_transport(u, v, static_cast<int>(state.range(0))).residual);
}
BENCHMARK(BM_Ladder)->Arg(62)->Arg(10000);

static void BM_SearchWord(benchmark::State& state) {
  Vec u = Vec::Unit(2, 0), v = Vec::Unit(2, 1);
  auto lad = ladder_transport(u, v, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_word(lad.lines, u, v, 6, static_cast<std::size_t>(state.range(0)), lad.residual + 1e-9));
  }
}
BENCHMARK(BM_SearchWord)->Arg(16)->Arg(256);

static void BM_DivergencePlan(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_divergence_plan(geometric_epsilons(6, 2)).total_loss);
}
BENCHMARK(BM_DivergencePlan)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
