#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "rbsr/fingerprint.hpp"
#include "rbsr/item.hpp"
#include "rbsr/range_store.hpp"

namespace rbsr {

struct RangeFingerprintPart {
  Item lower;
  Item upper;
  Fingerprint fingerprint;

  friend bool operator==(const RangeFingerprintPart&, const RangeFingerprintPart&) = default;
};

// Items of the sender within [lower, upper), in cyclic order from lower.
// is_response == false (flag byte 0) asks the receiver to answer with its
// own items of the range; true (flag byte 1) marks an answer.
struct RangeItemSetPart {
  Item lower;
  Item upper;
  std::vector<Item> items;
  bool is_response = false;

  friend bool operator==(const RangeItemSetPart&, const RangeItemSetPart&) = default;
};

using MessagePart = std::variant<RangeFingerprintPart, RangeItemSetPart>;

const Item& part_lower(const MessagePart& part);
const Item& part_upper(const MessagePart& part);

struct Message {
  std::vector<MessagePart> parts;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class SplitStrategy {
  equal,         // boundaries at ceil(j * count / k)
  random_shift,  // equal boundaries, each moved by up to max_shift ranks
  random,        // interior boundaries at uniformly random ranks
};

struct SessionConfig {
  std::size_t branching = 2;
  std::size_t threshold = 1;
  SplitStrategy split = SplitStrategy::equal;
  std::uint64_t seed = 0;
  std::size_t max_shift = 0;
  std::uint8_t scheme_id = kSchemeXor256;
  std::size_t item_width = kDefaultItemWidth;

  // Throws ConfigError when branching < 2, threshold < 1 or the width is
  // outside [1, 255].
  void validate() const;
};

enum class Role { initiator, responder };

// Checks part ordering, range disjointness, widths, digest lengths and
// item-set contents. Throws ProtocolError.
void validate_message(const Message& msg, std::size_t item_width, std::size_t digest_len);

// One side of a reconciliation session over a local store. The store is
// updated in place as item sets arrive.
class Session {
 public:
  Session(RangeStore& store, SessionConfig config, Role role);

  // The opening message: a single fingerprint over the full range starting
  // at the all-zero item.
  Message initiate();

  // Processes one incoming message. Returns the response, or nothing when
  // the response would be empty, in which case the session completes.
  std::optional<Message> handle_message(const Message& msg);

  // Boundaries m_0 = lower, ..., m_k = upper with 2 <= k <= branching, all
  // subranges nonempty in the local store. Requires local_count >= 2.
  std::vector<Item> split_range(const Item& lower, const Item& upper, std::size_t local_count);

  bool is_complete() const noexcept { return completed_; }
  // Completion signalled by the peer at the transport level.
  void mark_complete() noexcept { completed_ = true; }

  Role role() const noexcept { return role_; }
  const SessionConfig& config() const noexcept { return config_; }
  RangeStore& store() noexcept { return store_; }
  const RangeStore& store() const noexcept { return store_; }

 private:
  void require_active() const;

  RangeStore& store_;
  SessionConfig config_;
  Role role_;
  bool completed_ = false;
  bool initiated_ = false;
  std::mt19937_64 rng_;
};

}  // namespace rbsr
