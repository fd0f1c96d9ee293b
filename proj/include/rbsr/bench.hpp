#pragma once

#include <cstddef>
#include <cstdint>

#include "rbsr/protocol.hpp"
#include "rbsr/scenario.hpp"

namespace rbsr {

// 3 + 2 * ceil(log_b n_min) - floor(log_b t). Requires n_min >= 1.
std::int64_t round_bound(std::size_t n_min, std::size_t branching, std::size_t threshold);

// Multiplier of the byte bound, in units of byte_bound_unit().
inline constexpr double kByteBoundFactor = 4.0;

// Bytes of one part holding either a fingerprint or up to t items.
std::size_t byte_bound_unit(std::size_t item_width, std::size_t digest_len, std::size_t threshold);

// Handshakes, the opening frame and both DONE frames.
std::size_t fixed_overhead_bytes(std::size_t item_width, std::size_t digest_len);

// fixed overhead + factor * b * unit * min(n_delta * ceil(log2 n), n)
double byte_bound(std::size_t n_delta, std::size_t n, std::size_t item_width,
                  std::size_t digest_len, std::size_t branching, std::size_t threshold);

struct BenchSummary {
  ScenarioSpec spec;
  SessionConfig config;
  std::size_t repetitions = 0;

  double median_messages = 0;
  double median_bytes = 0;
  double median_parts = 0;
  double median_items = 0;
  double median_max_parts = 0;
  double median_edges = 0;
  double median_seconds = 0;
  std::uint64_t max_messages = 0;
  double median_n_delta = 0;

  std::size_t union_failures = 0;
  std::size_t round_bound_violations = 0;
  std::size_t byte_bound_violations = 0;

  bool ok() const noexcept {
    return union_failures == 0 && round_bound_violations == 0 && byte_bound_violations == 0;
  }
};

// Repetition r uses scenario seed spec.seed + r and session seed
// config.seed + r. Both nodes share `config`; the x0 node initiates.
BenchSummary bench(const ScenarioSpec& spec, const SessionConfig& config, std::size_t repetitions);

}  // namespace rbsr
