#include "rbsr/hash.hpp"

#include <openssl/evp.h>

#include <memory>

#include "rbsr/errors.hpp"

namespace rbsr {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

EVP_MD_CTX* thread_context() {
  thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
  return ctx.get();
}

}  // namespace

HashFunction HashFunction::by_name(std::string_view name) {
  static constexpr std::string_view kAllowed[] = {"sha256", "sha3-256", "blake2s256",
                                                  "sha512-256"};
  bool allowed = false;
  for (auto a : kAllowed) allowed = allowed || a == name;
  if (!allowed) throw ConfigError("unknown or unsupported hash: " + std::string(name));
  const std::string key(name);
  const EVP_MD* md = EVP_get_digestbyname(key.c_str());
  if (md == nullptr || EVP_MD_get_size(md) != 32) {
    throw ConfigError("hash not available as 256-bit digest: " + key);
  }
  return HashFunction(key, md);
}

Digest HashFunction::operator()(std::initializer_list<ByteView> pieces) const {
  EVP_MD_CTX* ctx = thread_context();
  const auto* md = static_cast<const EVP_MD*>(md_);
  if (ctx == nullptr || EVP_DigestInit_ex2(ctx, md, nullptr) != 1) {
    throw std::runtime_error("EVP_DigestInit failed");
  }
  for (ByteView p : pieces) {
    if (!p.empty() && EVP_DigestUpdate(ctx, p.data(), p.size()) != 1) {
      throw std::runtime_error("EVP_DigestUpdate failed");
    }
  }
  Digest out{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
    throw std::runtime_error("EVP_DigestFinal failed");
  }
  return out;
}

}  // namespace rbsr
