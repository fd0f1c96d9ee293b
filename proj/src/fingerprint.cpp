#include "rbsr/fingerprint.hpp"

#include "rbsr/errors.hpp"
#include "rbsr/hash.hpp"

namespace rbsr {

FingerprintScheme::FingerprintScheme(std::string name, std::uint8_t scheme_id,
                                     std::size_t digest_len, Fingerprint neutral,
                                     CombineFn combine, ProjectFn project, bool commutative)
    : name_(std::move(name)),
      scheme_id_(scheme_id),
      digest_len_(digest_len),
      neutral_(std::move(neutral)),
      combine_(std::move(combine)),
      project_(std::move(project)),
      commutative_(commutative) {
  if (digest_len_ != 0 && neutral_.size() != digest_len_) {
    throw ConfigError("neutral element length does not match digest length");
  }
}

namespace {

void check_lengths(const Fingerprint& a, const Fingerprint& b) {
  if (a.size() != b.size()) throw UsageError("fingerprint length mismatch");
}

FingerprintScheme::ProjectFn hash_projection(std::string_view hash_name) {
  HashFunction hash = HashFunction::by_name(hash_name);
  return [hash](const Item& item) {
    const Digest d = hash(item.bytes());
    return Fingerprint(ByteView(d));
  };
}

}  // namespace

FingerprintScheme make_xor_scheme(std::string_view hash_name) {
  auto combine = [](const Fingerprint& a, const Fingerprint& b) {
    check_lengths(a, b);
    Fingerprint out = a;
    Bytes& o = out.mutable_bytes();
    ByteView bb = b.bytes();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] ^= bb[i];
    return out;
  };
  return FingerprintScheme("xor256", kSchemeXor256, kDigestLen,
                           Fingerprint(Bytes(kDigestLen, 0)), combine,
                           hash_projection(hash_name), true);
}

namespace {

Fingerprint add_big_endian(const Fingerprint& a, const Fingerprint& b) {
  check_lengths(a, b);
  Fingerprint out = a;
  Bytes& o = out.mutable_bytes();
  ByteView bb = b.bytes();
  unsigned carry = 0;
  for (std::size_t i = o.size(); i-- > 0;) {
    const unsigned sum = unsigned{o[i]} + unsigned{bb[i]} + carry;
    o[i] = static_cast<std::uint8_t>(sum & 0xFF);
    carry = sum >> 8;
  }
  return out;
}

}  // namespace

FingerprintScheme make_sum_scheme(std::string_view hash_name) {
  return FingerprintScheme("sum256", kSchemeSum256, kDigestLen,
                           Fingerprint(Bytes(kDigestLen, 0)), add_big_endian,
                           hash_projection(hash_name), true);
}

FingerprintScheme make_count_scheme() {
  Bytes one(8, 0);
  one[7] = 1;
  Fingerprint unit{std::move(one)};
  return FingerprintScheme(
      "count", kSchemeInternal, 8, Fingerprint(Bytes(8, 0)), add_big_endian,
      [unit](const Item&) { return unit; }, true);
}

std::uint64_t count_value(const Fingerprint& fp) {
  if (fp.size() != 8) throw UsageError("count fingerprint must be 8 bytes");
  std::uint64_t v = 0;
  for (std::uint8_t b : fp.bytes()) v = (v << 8) | b;
  return v;
}

Fingerprint lift_oracle(const FingerprintScheme& scheme, std::span<const Item> items) {
  Fingerprint acc = scheme.neutral();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0 && !(items[i - 1] < items[i])) {
      throw UsageError("lift_oracle requires strictly ascending items");
    }
    acc = scheme.combine(acc, scheme.project(items[i]));
  }
  return acc;
}

}  // namespace rbsr
