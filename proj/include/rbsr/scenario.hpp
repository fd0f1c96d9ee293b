#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "rbsr/item.hpp"

namespace rbsr {

enum class ScenarioKind { random, worst_rounds, worst_bytes, adversarial_treap, equal, disjoint };

ScenarioKind scenario_kind_from_name(std::string_view name);
std::string_view scenario_kind_name(ScenarioKind kind);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::random;
  std::size_t n = 0;
  double overlap = 0.5;  // random kind only
  std::uint64_t seed = 0;
  std::size_t item_width = kDefaultItemWidth;

  // Throws ConfigError when overlap is outside [0, 1] or the universe is
  // too small for the requested sizes.
  void validate() const;
};

struct ScenarioSets {
  std::vector<Item> x0;
  std::vector<Item> x1;
};

// Both sets sorted ascending.
//   random            each side n items, round(overlap * n) shared
//   worst_rounds      x1 random, x0 = x1 without its middle item
//   worst_bytes       x1 random, x0 = every second item of x1
//   adversarial_treap x0 = adversarial_sequence(n), x1 = x0 without one item
//   equal / disjoint  as named, n items each
ScenarioSets gen_scenario(const ScenarioSpec& spec);

// `count` distinct uniformly random items, sorted ascending.
std::vector<Item> random_items(std::size_t count, std::size_t item_width, std::mt19937_64& rng);

}  // namespace rbsr
