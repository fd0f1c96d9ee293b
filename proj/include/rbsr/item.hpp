#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rbsr {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kDefaultItemWidth = 32;

// An element of the finite ordered universe: a fixed-width byte string,
// ordered lexicographically. The width is a session-wide constant.
class Item {
 public:
  Item() = default;
  explicit Item(Bytes bytes) : bytes_(std::move(bytes)) {}
  explicit Item(ByteView bytes) : bytes_(bytes.begin(), bytes.end()) {}

  static Item zero(std::size_t width) { return Item(Bytes(width, 0)); }
  // Big-endian encoding of `value`, left-padded with zeros. Throws
  // UsageError if the value does not fit in `width` bytes.
  static Item from_uint(std::uint64_t value, std::size_t width);
  static Item from_hex(std::string_view hex);

  std::size_t width() const noexcept { return bytes_.size(); }
  ByteView bytes() const noexcept { return bytes_; }
  std::string hex() const;

  friend bool operator==(const Item& a, const Item& b) = default;
  friend std::strong_ordering operator<=>(const Item& a, const Item& b) noexcept;

 private:
  Bytes bytes_;
};

// Checked comparison: throws UsageError when the widths differ.
std::strong_ordering item_compare(const Item& a, const Item& b);

// Cyclic half-open range [lower, upper). Any pair is valid:
//   lower < upper  -> lower <= s < upper
//   upper < lower  -> everything except [upper, lower)
//   lower == upper -> the whole universe
struct RangeBounds {
  Item lower;
  Item upper;

  friend bool operator==(const RangeBounds&, const RangeBounds&) = default;
};

bool range_is_full(const RangeBounds& r) noexcept;
bool range_wraps(const RangeBounds& r) noexcept;
bool range_contains(const RangeBounds& r, const Item& s) noexcept;

// Strict order on items as they appear when walking the cycle from `origin`:
// items >= origin ascending, then items < origin ascending.
bool cyclic_less(const Item& a, const Item& b, const Item& origin) noexcept;

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

}  // namespace rbsr
