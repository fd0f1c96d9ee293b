#include "rbsr/bench.hpp"

#include <algorithm>
#include <iterator>
#include <vector>

#include "rbsr/errors.hpp"
#include "rbsr/range_store.hpp"
#include "rbsr/simulate.hpp"

namespace rbsr {

namespace {

// Smallest k with b^k >= n.
std::int64_t ceil_log(std::size_t n, std::size_t b) {
  std::int64_t k = 0;
  for (std::size_t p = 1; p < n; p *= b) {
    ++k;
    if (p > (n - 1) / b) break;
  }
  return k;
}

// Largest k with b^k <= t.
std::int64_t floor_log(std::size_t t, std::size_t b) {
  std::int64_t k = 0;
  for (; t >= b; t /= b) ++k;
  return k;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

std::size_t symmetric_difference_size(const std::vector<Item>& a, const std::vector<Item>& b) {
  std::vector<Item> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return diff.size();
}

}  // namespace

std::int64_t round_bound(std::size_t n_min, std::size_t branching, std::size_t threshold) {
  if (n_min == 0) throw UsageError("round_bound requires n_min >= 1");
  if (branching < 2 || threshold < 1) throw UsageError("round_bound requires b >= 2, t >= 1");
  return 3 + 2 * ceil_log(n_min, branching) - floor_log(threshold, branching);
}

std::size_t byte_bound_unit(std::size_t item_width, std::size_t digest_len, std::size_t threshold) {
  return 6 + 2 * item_width + digest_len + threshold * item_width;
}

std::size_t fixed_overhead_bytes(std::size_t item_width, std::size_t digest_len) {
  return 2 * 9 + (4 + 1 + 2 * item_width + digest_len) + 2 * 4;
}

double byte_bound(std::size_t n_delta, std::size_t n, std::size_t item_width,
                  std::size_t digest_len, std::size_t branching, std::size_t threshold) {
  const double scaled = std::min<double>(static_cast<double>(n_delta) * ceil_log(n, 2),
                                         static_cast<double>(n));
  return static_cast<double>(fixed_overhead_bytes(item_width, digest_len)) +
         kByteBoundFactor * static_cast<double>(branching) *
             static_cast<double>(byte_bound_unit(item_width, digest_len, threshold)) * scaled;
}

BenchSummary bench(const ScenarioSpec& spec, const SessionConfig& config, std::size_t repetitions) {
  if (repetitions == 0) throw UsageError("bench needs at least one repetition");
  BenchSummary summary;
  summary.spec = spec;
  summary.config = config;
  summary.repetitions = repetitions;

  std::vector<double> messages, bytes, parts, items, max_parts, edges, seconds, deltas;
  for (std::size_t r = 0; r < repetitions; ++r) {
    ScenarioSpec rep_spec = spec;
    rep_spec.seed = spec.seed + r;
    rep_spec.item_width = config.item_width;
    SessionConfig rep_config = config;
    rep_config.seed = config.seed + r;

    const ScenarioSets sets = gen_scenario(rep_spec);
    const SimulationResult result = simulate(sets.x0, sets.x1, rep_config);
    const TranscriptStats& st = result.stats;

    std::vector<Item> expected;
    std::set_union(sets.x0.begin(), sets.x0.end(), sets.x1.begin(), sets.x1.end(),
                   std::back_inserter(expected));
    if (result.final0 != expected || result.final1 != expected) ++summary.union_failures;

    const std::size_t n_min = std::min(sets.x0.size(), sets.x1.size());
    if (n_min > 0 && static_cast<std::int64_t>(st.messages_total) >
                         round_bound(n_min, config.branching, config.threshold)) {
      ++summary.round_bound_violations;
    }
    const std::size_t n_delta = symmetric_difference_size(sets.x0, sets.x1);
    const std::size_t n = std::max(sets.x0.size(), sets.x1.size());
    const std::size_t digest = make_store(config.scheme_id, config.item_width, {})->digest_len();
    if (static_cast<double>(st.bytes_total()) >
        byte_bound(n_delta, n, config.item_width, digest, config.branching, config.threshold)) {
      ++summary.byte_bound_violations;
    }

    messages.push_back(static_cast<double>(st.messages_total));
    bytes.push_back(static_cast<double>(st.bytes_total()));
    parts.push_back(static_cast<double>(st.parts_total()));
    items.push_back(static_cast<double>(st.items_transmitted));
    max_parts.push_back(static_cast<double>(st.max_parts_in_message));
    edges.push_back(static_cast<double>(st.edges_traversed));
    seconds.push_back(st.duration_seconds);
    deltas.push_back(static_cast<double>(n_delta));
    summary.max_messages = std::max(summary.max_messages, st.messages_total);
  }
  summary.median_messages = median(messages);
  summary.median_bytes = median(bytes);
  summary.median_parts = median(parts);
  summary.median_items = median(items);
  summary.median_max_parts = median(max_parts);
  summary.median_edges = median(edges);
  summary.median_seconds = median(seconds);
  summary.median_n_delta = median(deltas);
  return summary;
}

}  // namespace rbsr
