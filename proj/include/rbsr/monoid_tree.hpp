#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rbsr/fingerprint.hpp"
#include "rbsr/item.hpp"
#include "rbsr/parallel.hpp"

namespace rbsr {

// AVL tree whose vertices cache the monoid fold of their subtree, the
// subtree size, the rightmost vertex of the subtree and a parent link.
// Range fingerprints take O(log n) time and O(1) auxiliary space.
//
// Single writer. The const query interface may be used from several threads
// at once only through aggregate_batch(), which keeps traversal counters
// race-free.
class MonoidTree {
 public:
  struct Node;

  // Position of the least stored value >= the last processed upper
  // boundary; exhausted when no such value exists.
  class RangeCursor {
   public:
    RangeCursor() = default;
    bool exhausted() const noexcept { return node_ == nullptr; }
    const Item& item() const;

   private:
    friend class MonoidTree;
    explicit RangeCursor(const Node* node) : node_(node) {}
    const Node* node_ = nullptr;
  };

  explicit MonoidTree(FingerprintScheme scheme);
  ~MonoidTree();
  MonoidTree(MonoidTree&&) noexcept;
  MonoidTree& operator=(MonoidTree&&) noexcept;
  MonoidTree(const MonoidTree&) = delete;
  MonoidTree& operator=(const MonoidTree&) = delete;

  // Builds a perfectly balanced tree in O(n) from strictly ascending items.
  // Item projections are computed with `exec`.
  static MonoidTree from_sorted(FingerprintScheme scheme, std::span<const Item> items,
                                Execution exec = Execution::parallel);

  const FingerprintScheme& scheme() const noexcept { return scheme_; }

  bool insert(const Item& item);
  bool erase(const Item& item);
  bool contains(const Item& item) const;

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  const Item& min_item() const;
  const Item& max_item() const;
  std::size_t height() const;

  // Fold of the whole set (neutral when empty).
  const Fingerprint& root_label() const noexcept;

  // Fold over range(x, y) with cyclic semantics. A wrapping range is folded
  // in cyclic order starting at x: fold([x, +inf)) then fold([-inf, y)).
  Fingerprint aggregate_range(const Item& x, const Item& y) const;
  Fingerprint aggregate_range(const RangeBounds& r) const {
    return aggregate_range(r.lower, r.upper);
  }

  // Cursor at the least stored value >= x.
  RangeCursor seek(const Item& x) const;

  // Fold of [cursor item, y) and the cursor for the next range, walking
  // parent links and subtree maxima. Requires x < y and a cursor positioned
  // at the least stored value >= x. An exhausted cursor yields neutral.
  std::pair<Fingerprint, RangeCursor> aggregate_until(RangeCursor cursor, const Item& x,
                                                      const Item& y) const;

  // Ascending sweep: one aggregate_until per range, reusing the cursor.
  // Ranges that wrap, are full, or start before the previous upper
  // boundary are answered with aggregate_range instead.
  std::vector<Fingerprint> aggregate_ascending(std::span<const RangeBounds> ranges) const;

  // Independent aggregate_range per range; Execution::parallel runs the
  // queries on OpenMP threads.
  std::vector<Fingerprint> aggregate_batch(std::span<const RangeBounds> ranges,
                                           Execution exec) const;

  std::size_t count_range(const RangeBounds& r) const;
  // Items of the range in cyclic ascending order starting at r.lower.
  std::vector<Item> items_in_range(const RangeBounds& r) const;

  // Number of stored values strictly below x.
  std::size_t rank_of(const Item& x) const;
  const Item& item_by_rank(std::size_t i) const;
  // The i-th stored value walking the cycle upward from x (inclusive).
  const Item& rank_in_range(const Item& x, std::size_t i) const;

  std::vector<Item> contents() const;

  // Full audit of labels, sizes, maxima, parent links, search order and
  // AVL balance. Empty string when the tree is consistent.
  std::string audit() const;

  std::uint64_t edges_traversed() const noexcept { return edges_; }
  void reset_edge_counter() const noexcept { edges_ = 0; }

 private:
  Fingerprint label_of(const Node* n) const;
  void update(Node* n) const;
  void rebalance(std::unique_ptr<Node>& slot);
  void rotate_left(std::unique_ptr<Node>& slot);
  void rotate_right(std::unique_ptr<Node>& slot);
  bool insert_at(std::unique_ptr<Node>& slot, Node* parent, const Item& item);
  bool erase_at(std::unique_ptr<Node>& slot, const Item& item);
  void erase_min(std::unique_ptr<Node>& slot);
  std::unique_ptr<Node> build(std::span<const Item> items, std::span<Fingerprint> projected,
                              Node* parent) const;

  Fingerprint fold_bounded(const Item* lo, const Item* hi, std::uint64_t& edges) const;
  Fingerprint aggregate_left(const Node* t, const Item& x, std::uint64_t& edges) const;
  Fingerprint aggregate_right(const Node* t, const Item& y, std::uint64_t& edges) const;
  Fingerprint aggregate_range_counted(const Item& x, const Item& y, std::uint64_t& edges) const;

  FingerprintScheme scheme_;
  std::unique_ptr<Node> root_;
  mutable std::uint64_t edges_ = 0;
};

}  // namespace rbsr
