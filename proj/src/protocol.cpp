#include "rbsr/protocol.hpp"

#include <algorithm>
#include <string>

#include "rbsr/errors.hpp"

namespace rbsr {

const Item& part_lower(const MessagePart& part) {
  return std::visit([](const auto& p) -> const Item& { return p.lower; }, part);
}

const Item& part_upper(const MessagePart& part) {
  return std::visit([](const auto& p) -> const Item& { return p.upper; }, part);
}

void SessionConfig::validate() const {
  if (branching < 2) throw ConfigError("branching must be at least 2");
  if (threshold < 1) throw ConfigError("threshold must be at least 1");
  if (item_width == 0 || item_width > 255) throw ConfigError("item width must be in [1, 255]");
}

namespace {

void fail(std::size_t part, const std::string& what) {
  throw ProtocolError("message part " + std::to_string(part) + ": " + what);
}

void validate_part(const MessagePart& part, std::size_t index, std::size_t item_width,
                   std::size_t digest_len) {
  const Item& lower = part_lower(part);
  const Item& upper = part_upper(part);
  if (lower.width() != item_width || upper.width() != item_width) fail(index, "boundary width");
  if (const auto* fp = std::get_if<RangeFingerprintPart>(&part)) {
    if (fp->fingerprint.size() != digest_len) fail(index, "fingerprint length");
    return;
  }
  const auto& set = std::get<RangeItemSetPart>(part);
  const RangeBounds range{lower, upper};
  for (std::size_t i = 0; i < set.items.size(); ++i) {
    const Item& item = set.items[i];
    if (item.width() != item_width) fail(index, "item width");
    if (!range_contains(range, item)) fail(index, "item outside its range");
    if (i > 0 && !cyclic_less(set.items[i - 1], item, lower)) {
      fail(index, "items not strictly ascending from the lower boundary");
    }
  }
}

}  // namespace

void validate_message(const Message& msg, std::size_t item_width, std::size_t digest_len) {
  if (msg.parts.empty()) throw ProtocolError("empty message");
  const std::size_t n = msg.parts.size();
  for (std::size_t i = 0; i < n; ++i) validate_part(msg.parts[i], i, item_width, digest_len);

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Item& lower = part_lower(msg.parts[i]);
    const Item& upper = part_upper(msg.parts[i]);
    if (!(lower < upper)) fail(i, "only the last part may wrap or cover everything");
    if (part_lower(msg.parts[i + 1]) < upper) fail(i, "ranges overlap or are out of order");
  }
  const Item& last_lower = part_lower(msg.parts[n - 1]);
  const Item& last_upper = part_upper(msg.parts[n - 1]);
  if (last_lower == last_upper && n > 1) fail(n - 1, "full range must be the only part");
  if (last_upper < last_lower && part_lower(msg.parts[0]) < last_upper) {
    fail(n - 1, "wrapping range overlaps the first part");
  }
}

Session::Session(RangeStore& store, SessionConfig config, Role role)
    : store_(store), config_(config), role_(role), rng_(config.seed) {
  config_.validate();
  if (config_.scheme_id != store_.scheme_id()) throw ConfigError("store scheme does not match");
  if (config_.item_width != store_.item_width()) throw ConfigError("store width does not match");
}

void Session::require_active() const {
  if (completed_) throw UsageError("session already completed");
}

Message Session::initiate() {
  require_active();
  if (initiated_) throw UsageError("session already initiated");
  initiated_ = true;
  const Item zero = Item::zero(config_.item_width);
  RangeFingerprintPart part{zero, zero, store_.fingerprint({zero, zero})};
  return Message{{std::move(part)}};
}

std::vector<Item> Session::split_range(const Item& lower, const Item& upper,
                                       std::size_t local_count) {
  if (local_count < 2) throw UsageError("split_range requires at least two local items");
  const std::size_t k = std::min(config_.branching, local_count);
  std::vector<std::size_t> ranks;
  ranks.reserve(k - 1);
  switch (config_.split) {
    case SplitStrategy::equal:
    case SplitStrategy::random_shift:
      for (std::size_t j = 1; j < k; ++j) ranks.push_back((j * local_count + k - 1) / k);
      if (config_.split == SplitStrategy::random_shift && config_.max_shift > 0) {
        const auto shift = static_cast<long long>(config_.max_shift);
        std::uniform_int_distribution<long long> draw(-shift, shift);
        const auto hi = static_cast<long long>(local_count) - 1;
        for (std::size_t& r : ranks) {
          const long long moved = static_cast<long long>(r) + draw(rng_);
          r = static_cast<std::size_t>(std::clamp(moved, 1LL, hi));
        }
      }
      break;
    case SplitStrategy::random: {
      std::uniform_int_distribution<std::size_t> draw(1, local_count - 1);
      for (std::size_t j = 1; j < k; ++j) ranks.push_back(draw(rng_));
      break;
    }
  }
  // Distinct ranks in [1, count - 1] keep every subrange nonempty, and at
  // least one interior boundary always survives.
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

  std::vector<Item> bounds;
  bounds.reserve(ranks.size() + 2);
  bounds.push_back(lower);
  for (std::size_t r : ranks) bounds.push_back(store_.item_from(lower, r));
  bounds.push_back(upper);
  return bounds;
}

std::optional<Message> Session::handle_message(const Message& msg) {
  require_active();
  validate_message(msg, config_.item_width, store_.digest_len());

  std::vector<MessagePart> response;

  // Received items go into the store before any fingerprint is evaluated.
  for (const MessagePart& part : msg.parts) {
    if (const auto* set = std::get_if<RangeItemSetPart>(&part)) {
      for (const Item& item : set->items) store_.insert(item);
    }
  }
  for (const MessagePart& part : msg.parts) {
    const auto* set = std::get_if<RangeItemSetPart>(&part);
    if (!set || set->is_response) continue;
    const std::vector<Item> local = store_.items({set->lower, set->upper});
    std::vector<Item> missing;
    const Item& origin = set->lower;
    std::set_difference(local.begin(), local.end(), set->items.begin(), set->items.end(),
                        std::back_inserter(missing), [&origin](const Item& a, const Item& b) {
                          return cyclic_less(a, b, origin);
                        });
    if (!missing.empty()) {
      response.emplace_back(RangeItemSetPart{set->lower, set->upper, std::move(missing), true});
    }
  }

  std::vector<const RangeFingerprintPart*> received;
  std::vector<RangeBounds> ranges;
  for (const MessagePart& part : msg.parts) {
    if (const auto* fp = std::get_if<RangeFingerprintPart>(&part)) {
      received.push_back(fp);
      ranges.push_back({fp->lower, fp->upper});
    }
  }
  const std::vector<Fingerprint> local_fps = store_.fingerprints(ranges);
  const Fingerprint empty = store_.empty_fingerprint();

  std::vector<std::size_t> pending_slots;
  std::vector<RangeBounds> pending_ranges;
  for (std::size_t i = 0; i < received.size(); ++i) {
    const RangeFingerprintPart& part = *received[i];
    if (local_fps[i] == part.fingerprint) continue;
    const std::size_t count = store_.count(ranges[i]);
    if (count <= config_.threshold || part.fingerprint == empty) {
      response.emplace_back(
          RangeItemSetPart{part.lower, part.upper, store_.items(ranges[i]), false});
      continue;
    }
    const std::vector<Item> bounds = split_range(part.lower, part.upper, count);
    for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
      RangeBounds sub{bounds[j], bounds[j + 1]};
      if (store_.count(sub) > config_.threshold) {
        pending_slots.push_back(response.size());
        response.emplace_back(RangeFingerprintPart{sub.lower, sub.upper, Fingerprint{}});
        pending_ranges.push_back(std::move(sub));
      } else {
        std::vector<Item> items = store_.items(sub);
        response.emplace_back(
            RangeItemSetPart{std::move(sub.lower), std::move(sub.upper), std::move(items), false});
      }
    }
  }
  std::vector<Fingerprint> sub_fps = store_.fingerprints(pending_ranges);
  for (std::size_t i = 0; i < pending_slots.size(); ++i) {
    std::get<RangeFingerprintPart>(response[pending_slots[i]]).fingerprint = std::move(sub_fps[i]);
  }

  if (response.empty()) {
    completed_ = true;
    return std::nullopt;
  }
  std::stable_sort(response.begin(), response.end(),
                   [](const MessagePart& a, const MessagePart& b) {
                     return part_lower(a) < part_lower(b);
                   });
  return Message{std::move(response)};
}

}  // namespace rbsr
