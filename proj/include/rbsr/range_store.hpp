#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rbsr/fingerprint.hpp"
#include "rbsr/item.hpp"
#include "rbsr/parallel.hpp"

namespace rbsr {

// How a monoid-backed store answers a batch of range fingerprints.
enum class BatchMode {
  ascending_sweep,  // cursor-reusing sweep over the ascending ranges
  independent,      // one O(log n) query per range, serial
  parallel,         // one O(log n) query per range, OpenMP
};

// The operations the reconciliation protocol needs from a local set:
// range fingerprints, range item listing, counts, and split-point lookup.
class RangeStore {
 public:
  virtual ~RangeStore() = default;

  virtual std::uint8_t scheme_id() const = 0;
  virtual std::size_t digest_len() const = 0;
  virtual std::size_t item_width() const = 0;

  virtual Fingerprint empty_fingerprint() const = 0;
  virtual Fingerprint fingerprint(const RangeBounds& r) const = 0;
  // Ranges are expected in ascending order of lower boundary; results are
  // in input order.
  virtual std::vector<Fingerprint> fingerprints(std::span<const RangeBounds> ranges) const;

  virtual std::size_t count(const RangeBounds& r) const = 0;
  virtual std::vector<Item> items(const RangeBounds& r) const = 0;
  // The item `offset` positions onward from `lower` in cyclic order.
  virtual Item item_from(const Item& lower, std::size_t offset) const = 0;

  virtual bool insert(const Item& item) = 0;
  virtual std::size_t size() const = 0;
  virtual std::vector<Item> contents() const = 0;

  virtual std::uint64_t edges_traversed() const = 0;
};

// Scheme names accepted on the command line: xor256, sum256, treap256.
std::uint8_t scheme_id_from_name(std::string_view name);
std::string_view scheme_name(std::uint8_t scheme_id);

// Store over strictly ascending `items` for a wire scheme id. Throws
// ConfigError for unknown scheme ids.
std::unique_ptr<RangeStore> make_store(std::uint8_t scheme_id, std::size_t item_width,
                                       std::span<const Item> items,
                                       BatchMode batch = BatchMode::ascending_sweep,
                                       Execution build = Execution::parallel);

}  // namespace rbsr
