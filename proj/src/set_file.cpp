#include "rbsr/set_file.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "rbsr/errors.hpp"

namespace rbsr {

namespace {

constexpr char kSetMagic[4] = {'R', 'S', 'E', 'T'};
constexpr std::size_t kHeaderSize = 13;

}  // namespace

Bytes encode_set(std::size_t item_width, std::span<const Item> items) {
  if (item_width == 0 || item_width > 255) throw UsageError("item width must be in [1, 255]");
  Bytes out(std::begin(kSetMagic), std::end(kSetMagic));
  out.push_back(static_cast<std::uint8_t>(item_width));
  const std::uint64_t count = items.size();
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(count >> shift));
  out.reserve(out.size() + items.size() * item_width);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].width() != item_width) throw UsageError("item width mismatch in set");
    if (i > 0 && !(items[i - 1] < items[i])) throw UsageError("set items must be strictly ascending");
    out.insert(out.end(), items[i].bytes().begin(), items[i].bytes().end());
  }
  return out;
}

ItemSet decode_set(ByteView bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kSetMagic, 4) != 0) {
    throw ConfigError("not a set file");
  }
  ItemSet set;
  set.item_width = bytes[4];
  if (set.item_width == 0) throw ConfigError("set file has item width 0");
  std::uint64_t count = 0;
  for (std::size_t i = 5; i < kHeaderSize; ++i) count = (count << 8) | bytes[i];
  const std::size_t body = bytes.size() - kHeaderSize;
  if (count != body / set.item_width || body % set.item_width != 0) {
    throw ConfigError("set file length does not match its item count");
  }
  set.items.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    set.items.emplace_back(bytes.subspan(kHeaderSize + i * set.item_width, set.item_width));
    if (i > 0 && !(set.items[i - 1] < set.items[i])) {
      throw ConfigError("set file items are not strictly ascending");
    }
  }
  return set;
}

void write_set_file(const std::string& path, std::size_t item_width, std::span<const Item> items) {
  const Bytes bytes = encode_set(item_width, items);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ConfigError("failed writing " + path);
}

ItemSet read_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_set(bytes);
}

}  // namespace rbsr
