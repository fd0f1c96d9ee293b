#include "rbsr/range_store.hpp"

#include <string>

#include "rbsr/errors.hpp"
#include "rbsr/merkle_treap.hpp"
#include "rbsr/monoid_tree.hpp"

namespace rbsr {

std::vector<Fingerprint> RangeStore::fingerprints(std::span<const RangeBounds> ranges) const {
  std::vector<Fingerprint> out;
  out.reserve(ranges.size());
  for (const RangeBounds& r : ranges) out.push_back(fingerprint(r));
  return out;
}

namespace {

void check_width(const Item& item, std::size_t width) {
  if (item.width() != width) throw UsageError("item width does not match store");
}

class MonoidStore final : public RangeStore {
 public:
  MonoidStore(FingerprintScheme scheme, std::size_t width, std::span<const Item> items,
              BatchMode batch, Execution build)
      : tree_(MonoidTree::from_sorted(std::move(scheme), items, build)),
        width_(width),
        batch_(batch) {
    for (const Item& i : items) check_width(i, width_);
  }

  std::uint8_t scheme_id() const override { return tree_.scheme().scheme_id(); }
  std::size_t digest_len() const override { return tree_.scheme().digest_len(); }
  std::size_t item_width() const override { return width_; }

  Fingerprint empty_fingerprint() const override { return tree_.scheme().neutral(); }
  Fingerprint fingerprint(const RangeBounds& r) const override {
    return tree_.aggregate_range(r);
  }
  std::vector<Fingerprint> fingerprints(std::span<const RangeBounds> ranges) const override {
    switch (batch_) {
      case BatchMode::ascending_sweep:
        return tree_.aggregate_ascending(ranges);
      case BatchMode::independent:
        return tree_.aggregate_batch(ranges, Execution::serial);
      case BatchMode::parallel:
        return tree_.aggregate_batch(ranges, Execution::parallel);
    }
    return RangeStore::fingerprints(ranges);
  }

  std::size_t count(const RangeBounds& r) const override { return tree_.count_range(r); }
  std::vector<Item> items(const RangeBounds& r) const override { return tree_.items_in_range(r); }
  Item item_from(const Item& lower, std::size_t offset) const override {
    return tree_.rank_in_range(lower, offset);
  }

  bool insert(const Item& item) override {
    check_width(item, width_);
    return tree_.insert(item);
  }
  std::size_t size() const override { return tree_.size(); }
  std::vector<Item> contents() const override { return tree_.contents(); }
  std::uint64_t edges_traversed() const override { return tree_.edges_traversed(); }

 private:
  MonoidTree tree_;
  std::size_t width_;
  BatchMode batch_;
};

class TreapStore final : public RangeStore {
 public:
  TreapStore(std::size_t width, std::span<const Item> items, Execution build)
      : treap_(MerkleTreap::from_sorted(items, HashFunction::sha256(), build)), width_(width) {
    for (const Item& i : items) check_width(i, width_);
  }

  std::uint8_t scheme_id() const override { return kSchemeMerkleTreap256; }
  std::size_t digest_len() const override { return kDigestLen; }
  std::size_t item_width() const override { return width_; }

  Fingerprint empty_fingerprint() const override {
    return Fingerprint(ByteView(treap_.empty_fingerprint()));
  }
  Fingerprint fingerprint(const RangeBounds& r) const override {
    return Fingerprint(ByteView(treap_.aggregate_range(r)));
  }

  std::size_t count(const RangeBounds& r) const override { return treap_.count_range(r); }
  std::vector<Item> items(const RangeBounds& r) const override {
    return treap_.items_in_range(r);
  }
  Item item_from(const Item& lower, std::size_t offset) const override {
    return treap_.rank_in_range(lower, offset);
  }

  bool insert(const Item& item) override {
    check_width(item, width_);
    return treap_.insert(item);
  }
  std::size_t size() const override { return treap_.size(); }
  std::vector<Item> contents() const override { return treap_.contents(); }
  std::uint64_t edges_traversed() const override { return treap_.edges_traversed(); }

 private:
  MerkleTreap treap_;
  std::size_t width_;
};

}  // namespace

std::uint8_t scheme_id_from_name(std::string_view name) {
  if (name == "xor256") return kSchemeXor256;
  if (name == "sum256") return kSchemeSum256;
  if (name == "treap256") return kSchemeMerkleTreap256;
  throw ConfigError("unknown scheme: " + std::string(name));
}

std::string_view scheme_name(std::uint8_t scheme_id) {
  switch (scheme_id) {
    case kSchemeXor256:
      return "xor256";
    case kSchemeSum256:
      return "sum256";
    case kSchemeMerkleTreap256:
      return "treap256";
    default:
      throw ConfigError("unknown scheme id " + std::to_string(scheme_id));
  }
}

std::unique_ptr<RangeStore> make_store(std::uint8_t scheme_id, std::size_t item_width,
                                       std::span<const Item> items, BatchMode batch,
                                       Execution build) {
  if (item_width == 0 || item_width > 255) throw ConfigError("item width must be in [1, 255]");
  switch (scheme_id) {
    case kSchemeXor256:
      return std::make_unique<MonoidStore>(make_xor_scheme(), item_width, items, batch, build);
    case kSchemeSum256:
      return std::make_unique<MonoidStore>(make_sum_scheme(), item_width, items, batch, build);
    case kSchemeMerkleTreap256:
      return std::make_unique<TreapStore>(item_width, items, build);
    default:
      throw ConfigError("unknown scheme id " + std::to_string(scheme_id));
  }
}

}  // namespace rbsr
