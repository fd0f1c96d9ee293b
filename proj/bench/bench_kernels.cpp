// Serial reference vs OpenMP kernels, and single-range folds vs the
// ascending sweep.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rbsr/fingerprint.hpp"
#include "rbsr/merkle_treap.hpp"
#include "rbsr/monoid_tree.hpp"
#include "rbsr/scenario.hpp"
#include "rbsr/simulate.hpp"

namespace {

using namespace rbsr;

std::vector<Item> make_items(std::size_t n) {
  std::mt19937_64 rng(n);
  return random_items(n, kDefaultItemWidth, rng);
}

// Ascending, adjacent ranges covering the stored items, `per` items each.
std::vector<RangeBounds> partition(const std::vector<Item>& items, std::size_t per) {
  std::vector<RangeBounds> out;
  for (std::size_t i = 0; i + per < items.size(); i += per) {
    out.push_back({items[i], items[i + per]});
  }
  return out;
}

void BM_MonoidBuild(benchmark::State& state, Execution exec) {
  const auto items = make_items(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MonoidTree::from_sorted(make_xor_scheme(), items, exec).size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TreapBuild(benchmark::State& state, Execution exec) {
  const auto items = make_items(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        MerkleTreap::from_sorted(items, HashFunction::sha256(), exec).size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchFingerprints(benchmark::State& state, int mode) {
  const auto items = make_items(static_cast<std::size_t>(state.range(0)));
  const auto tree = MonoidTree::from_sorted(make_xor_scheme(), items);
  const auto ranges = partition(items, 4);
  for (auto _ : state) {
    std::vector<Fingerprint> out;
    if (mode == 0) out = tree.aggregate_batch(ranges, Execution::serial);
    if (mode == 1) out = tree.aggregate_batch(ranges, Execution::parallel);
    if (mode == 2) out = tree.aggregate_ascending(ranges);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ranges.size()));
}

void BM_Simulate(benchmark::State& state, std::uint8_t scheme) {
  ScenarioSpec spec;
  spec.n = static_cast<std::size_t>(state.range(0));
  spec.overlap = 0.9;
  const ScenarioSets sets = gen_scenario(spec);
  SessionConfig config;
  config.scheme_id = scheme;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(sets.x0, sets.x1, config).stats.messages_total);
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_MonoidBuild, serial, Execution::serial)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_MonoidBuild, parallel, Execution::parallel)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_TreapBuild, serial, Execution::serial)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_TreapBuild, parallel, Execution::parallel)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_BatchFingerprints, independent_serial, 0)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_BatchFingerprints, independent_parallel, 1)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_BatchFingerprints, ascending_sweep, 2)->Range(1 << 10, 1 << 16);
BENCHMARK_CAPTURE(BM_Simulate, xor256, kSchemeXor256)->Range(1 << 8, 1 << 12);
BENCHMARK_CAPTURE(BM_Simulate, treap256, kSchemeMerkleTreap256)->Range(1 << 8, 1 << 12);

BENCHMARK_MAIN();
