#include "rbsr/item.hpp"

#include <algorithm>
#include <cstring>

#include "rbsr/errors.hpp"

namespace rbsr {

Item Item::from_uint(std::uint64_t value, std::size_t width) {
  Bytes bytes(width, 0);
  for (std::size_t i = 0; i < width && value != 0; ++i) {
    bytes[width - 1 - i] = static_cast<std::uint8_t>(value & 0xFF);
    value >>= 8;
  }
  if (value != 0) throw UsageError("value does not fit in item width");
  return Item(std::move(bytes));
}

Item Item::from_hex(std::string_view hex) { return Item(rbsr::from_hex(hex)); }

std::string Item::hex() const { return to_hex(bytes_); }

std::strong_ordering operator<=>(const Item& a, const Item& b) noexcept {
  const std::size_t common = std::min(a.width(), b.width());
  if (common != 0) {
    const int c = std::memcmp(a.bytes_.data(), b.bytes_.data(), common);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return a.width() <=> b.width();
}

std::strong_ordering item_compare(const Item& a, const Item& b) {
  if (a.width() != b.width()) {
    throw UsageError("item width mismatch: " + std::to_string(a.width()) +
                     " vs " + std::to_string(b.width()));
  }
  return a <=> b;
}

bool range_is_full(const RangeBounds& r) noexcept { return r.lower == r.upper; }

bool range_wraps(const RangeBounds& r) noexcept { return r.upper < r.lower; }

bool range_contains(const RangeBounds& r, const Item& s) noexcept {
  if (r.lower < r.upper) return r.lower <= s && s < r.upper;
  if (r.upper < r.lower) return !(r.upper <= s && s < r.lower);
  return true;
}

bool cyclic_less(const Item& a, const Item& b, const Item& origin) noexcept {
  const bool a_high = origin <= a;
  const bool b_high = origin <= b;
  if (a_high != b_high) return a_high;
  return a < b;
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0F]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw UsageError("odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = nibble(hex[2 * i]);
    const int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw UsageError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

}  // namespace rbsr
