#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "rbsr/item.hpp"

namespace rbsr {

using Digest = std::array<std::uint8_t, 32>;

// A named 256-bit cryptographic hash backed by OpenSSL's EVP interface.
// Copyable and safe to share across threads; each thread keeps its own
// digest context.
class HashFunction {
 public:
  // Accepts "sha256", "sha3-256", "blake2s256" and "sha512-256".
  // Throws ConfigError for anything else.
  static HashFunction by_name(std::string_view name);
  static HashFunction sha256() { return by_name("sha256"); }

  Digest operator()(ByteView data) const { return (*this)({data}); }
  // Hash of the concatenation of `pieces`.
  Digest operator()(std::initializer_list<ByteView> pieces) const;

  const std::string& name() const noexcept { return name_; }

 private:
  HashFunction(std::string name, const void* md) : name_(std::move(name)), md_(md) {}

  std::string name_;
  const void* md_;  // const EVP_MD*
};

}  // namespace rbsr
