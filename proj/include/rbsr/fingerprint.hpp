#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "rbsr/item.hpp"

namespace rbsr {

// Wire registry of scheme identifiers. The count scheme never leaves the
// process and uses kSchemeInternal.
inline constexpr std::uint8_t kSchemeInternal = 0x00;
inline constexpr std::uint8_t kSchemeXor256 = 0x01;
inline constexpr std::uint8_t kSchemeSum256 = 0x02;
inline constexpr std::uint8_t kSchemeMerkleTreap256 = 0x03;

inline constexpr std::size_t kDigestLen = 32;

class Fingerprint {
 public:
  Fingerprint() = default;
  explicit Fingerprint(Bytes bytes) : bytes_(std::move(bytes)) {}
  explicit Fingerprint(ByteView bytes) : bytes_(bytes.begin(), bytes.end()) {}

  std::size_t size() const noexcept { return bytes_.size(); }
  ByteView bytes() const noexcept { return bytes_; }
  Bytes& mutable_bytes() noexcept { return bytes_; }
  std::string hex() const { return to_hex(bytes_); }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;

 private:
  Bytes bytes_;
};

// A monoid (neutral, combine) together with the per-item projection that
// is lifted to finite sets by folding over the items in ascending order.
// Immutable after construction.
class FingerprintScheme {
 public:
  using CombineFn = std::function<Fingerprint(const Fingerprint&, const Fingerprint&)>;
  using ProjectFn = std::function<Fingerprint(const Item&)>;

  // digest_len 0 means variable-length fingerprints (test monoids only).
  FingerprintScheme(std::string name, std::uint8_t scheme_id, std::size_t digest_len,
                    Fingerprint neutral, CombineFn combine, ProjectFn project,
                    bool commutative);

  const std::string& name() const noexcept { return name_; }
  std::uint8_t scheme_id() const noexcept { return scheme_id_; }
  std::size_t digest_len() const noexcept { return digest_len_; }
  bool commutative() const noexcept { return commutative_; }

  const Fingerprint& neutral() const noexcept { return neutral_; }
  Fingerprint combine(const Fingerprint& a, const Fingerprint& b) const { return combine_(a, b); }
  Fingerprint combine(const Fingerprint& a, const Fingerprint& b, const Fingerprint& c) const {
    return combine_(combine_(a, b), c);
  }
  Fingerprint project(const Item& item) const { return project_(item); }

 private:
  std::string name_;
  std::uint8_t scheme_id_;
  std::size_t digest_len_;
  Fingerprint neutral_;
  CombineFn combine_;
  ProjectFn project_;
  bool commutative_;
};

// project = H(item), combine = bytewise xor, neutral = zero digest.
// Not collision resistant against an active adversary: collisions reduce to
// linear algebra over GF(2).
FingerprintScheme make_xor_scheme(std::string_view hash_name = "sha256");

// project = H(item), combine = addition mod 2^256 (big-endian).
// Vulnerable to generalized-birthday attacks at this digest size.
FingerprintScheme make_sum_scheme(std::string_view hash_name = "sha256");

// 8-byte big-endian counter; project maps every item to 1.
FingerprintScheme make_count_scheme();

// Multiplication mod 2^k is intentionally absent: a single zero projection
// annihilates the whole fold.

std::uint64_t count_value(const Fingerprint& fp);

// Ground truth: left fold of combine over project(item), ascending order,
// starting from neutral. Throws UsageError unless `items` is strictly
// ascending.
Fingerprint lift_oracle(const FingerprintScheme& scheme, std::span<const Item> items);

}  // namespace rbsr
