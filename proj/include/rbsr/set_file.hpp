#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rbsr/item.hpp"

namespace rbsr {

// "RSET", 1-byte item width, 8-byte big-endian count, then the items
// as raw bytes in strictly ascending order.
struct ItemSet {
  std::size_t item_width = kDefaultItemWidth;
  std::vector<Item> items;
};

Bytes encode_set(std::size_t item_width, std::span<const Item> items);
// Throws ConfigError on a malformed or unsorted file.
ItemSet decode_set(ByteView bytes);

void write_set_file(const std::string& path, std::size_t item_width, std::span<const Item> items);
ItemSet read_set_file(const std::string& path);

}  // namespace rbsr
