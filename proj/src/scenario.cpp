#include "rbsr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "rbsr/errors.hpp"
#include "rbsr/hash.hpp"
#include "rbsr/merkle_treap.hpp"

namespace rbsr {

namespace {

constexpr struct {
  ScenarioKind kind;
  std::string_view name;
} kKindNames[] = {
    {ScenarioKind::random, "random"},
    {ScenarioKind::worst_rounds, "worst_rounds"},
    {ScenarioKind::worst_bytes, "worst_bytes"},
    {ScenarioKind::adversarial_treap, "adversarial_treap"},
    {ScenarioKind::equal, "equal"},
    {ScenarioKind::disjoint, "disjoint"},
};

// Size of the universe of `width`-byte items, saturated at 2^64 - 1.
std::uint64_t universe_size(std::size_t width) {
  if (width >= 8) return UINT64_MAX;
  return std::uint64_t{1} << (8 * width);
}

std::size_t shared_count(const ScenarioSpec& spec) {
  return static_cast<std::size_t>(std::llround(spec.overlap * static_cast<double>(spec.n)));
}

std::size_t distinct_needed(const ScenarioSpec& spec) {
  switch (spec.kind) {
    case ScenarioKind::random:
      return 2 * spec.n - shared_count(spec);
    case ScenarioKind::disjoint:
      return 2 * spec.n;
    default:
      return spec.n;
  }
}

}  // namespace

ScenarioKind scenario_kind_from_name(std::string_view name) {
  for (const auto& entry : kKindNames) {
    if (entry.name == name) return entry.kind;
  }
  throw ConfigError("unknown scenario kind: " + std::string(name));
}

std::string_view scenario_kind_name(ScenarioKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

void ScenarioSpec::validate() const {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("overlap must be in [0, 1]");
  if (item_width == 0 || item_width > 255) throw ConfigError("item width must be in [1, 255]");
  if (kind == ScenarioKind::adversarial_treap && item_width < 8) {
    throw ConfigError("adversarial_treap needs item width >= 8");
  }
  if (distinct_needed(*this) > universe_size(item_width)) {
    throw ConfigError("universe too small for " + std::to_string(distinct_needed(*this)) +
                      " distinct items");
  }
}

std::vector<Item> random_items(std::size_t count, std::size_t item_width, std::mt19937_64& rng) {
  const std::uint64_t universe = universe_size(item_width);
  if (count > universe) throw UsageError("more items requested than the universe holds");
  if (universe <= (std::uint64_t{1} << 20) && 2 * count > universe) {
    std::vector<std::uint64_t> all(universe);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    std::vector<Item> out;
    out.reserve(count);
    for (std::uint64_t v : all) out.push_back(Item::from_uint(v, item_width));
    return out;
  }
  std::set<Item> picked;
  Bytes buf(item_width);
  while (picked.size() < count) {
    for (std::size_t i = 0; i < item_width; i += 8) {
      const std::uint64_t r = rng();
      for (std::size_t j = 0; j < 8 && i + j < item_width; ++j) {
        buf[i + j] = static_cast<std::uint8_t>(r >> (8 * j));
      }
    }
    picked.emplace(buf);
  }
  return {picked.begin(), picked.end()};
}

ScenarioSets gen_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  ScenarioSets out;
  const std::size_t n = spec.n;
  switch (spec.kind) {
    case ScenarioKind::random:
    case ScenarioKind::disjoint: {
      const std::size_t shared = spec.kind == ScenarioKind::random ? shared_count(spec) : 0;
      std::vector<Item> pool = random_items(2 * n - shared, spec.item_width, rng);
      std::shuffle(pool.begin(), pool.end(), rng);
      const auto shared_end = pool.begin() + static_cast<std::ptrdiff_t>(shared);
      const auto x0_end = shared_end + static_cast<std::ptrdiff_t>(n - shared);
      out.x0.assign(pool.begin(), x0_end);
      out.x1.assign(pool.begin(), shared_end);
      out.x1.insert(out.x1.end(), x0_end, pool.end());
      std::sort(out.x0.begin(), out.x0.end());
      std::sort(out.x1.begin(), out.x1.end());
      break;
    }
    case ScenarioKind::equal:
      out.x1 = random_items(n, spec.item_width, rng);
      out.x0 = out.x1;
      break;
    case ScenarioKind::worst_rounds:
      out.x1 = random_items(n, spec.item_width, rng);
      out.x0 = out.x1;
      if (n > 0) out.x0.erase(out.x0.begin() + static_cast<std::ptrdiff_t>(n / 2));
      break;
    case ScenarioKind::worst_bytes:
      out.x1 = random_items(n, spec.item_width, rng);
      for (std::size_t i = 0; i < n; i += 2) out.x0.push_back(out.x1[i]);
      break;
    case ScenarioKind::adversarial_treap:
      if (n > 0) {
        out.x0 = adversarial_sequence(n, spec.seed, spec.item_width, HashFunction::sha256());
        out.x1 = out.x0;
        out.x1.erase(out.x1.begin() + static_cast<std::ptrdiff_t>(n / 2));
      }
      break;
  }
  return out;
}

}  // namespace rbsr
