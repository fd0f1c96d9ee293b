#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbsr/hash.hpp"
#include "rbsr/item.hpp"
#include "rbsr/parallel.hpp"

namespace rbsr {

// Treap whose shape is a pure function of its contents: priorities are
// p(u) = H(0x00 || u), and ties (only reachable with a stub priority
// function) are broken by item order, the smaller item ranking lower.
//
// Vertices carry Merkle labels with h(data) = H(0x01 || data):
//   leaf      -> h(value)
//   internal  -> h(label(left) || h(value) || label(right)), absent
//                children omitted
// The fingerprint of a set is the root label, or h("") for the empty set.
class MerkleTreap {
 public:
  struct Node;
  using PriorityFn = std::function<Digest(const Item&)>;

  explicit MerkleTreap(HashFunction hash = HashFunction::sha256());
  // Replaces the priority function; tests use this to force ties.
  MerkleTreap(HashFunction hash, PriorityFn priority);
  ~MerkleTreap();
  MerkleTreap(MerkleTreap&&) noexcept;
  MerkleTreap& operator=(MerkleTreap&&) noexcept;
  MerkleTreap(const MerkleTreap&) = delete;
  MerkleTreap& operator=(const MerkleTreap&) = delete;

  // O(n) Cartesian-tree construction from strictly ascending items;
  // priorities and value hashes are computed with `exec`.
  static MerkleTreap from_sorted(std::span<const Item> items,
                                 HashFunction hash = HashFunction::sha256(),
                                 Execution exec = Execution::parallel);

  bool insert(const Item& item);
  bool erase(const Item& item);
  bool contains(const Item& item) const;

  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }
  std::size_t height() const;
  const Item& min_item() const;
  const Item& max_item() const;

  Digest root_fingerprint() const;
  Digest empty_fingerprint() const { return label_hash({}); }

  // Fingerprint of range(x, y). For x < y this is the root label of the
  // treap on exactly the items of the range; x == y gives the root label.
  // A wrapping range hashes h(0x02 || A || B) where A covers [x, +inf),
  // B covers [-inf, y) and absent halves are omitted; h("") if both are
  // empty.
  Digest aggregate_range(const Item& x, const Item& y) const;
  Digest aggregate_range(const RangeBounds& r) const { return aggregate_range(r.lower, r.upper); }

  std::size_t count_range(const RangeBounds& r) const;
  std::vector<Item> items_in_range(const RangeBounds& r) const;
  std::size_t rank_of(const Item& x) const;
  const Item& item_by_rank(std::size_t i) const;
  const Item& rank_in_range(const Item& x, std::size_t i) const;
  std::vector<Item> contents() const;

  Digest priority_of(const Item& item) const { return priority_(item); }
  Digest value_hash(const Item& item) const;
  // h(concatenation of pieces).
  Digest label_hash(std::initializer_list<ByteView> pieces) const;
  const HashFunction& hash() const noexcept { return hash_; }

  // Heap order, search order, labels, sizes, maxima and parent links.
  std::string audit() const;

  std::uint64_t edges_traversed() const noexcept { return edges_; }
  void reset_edge_counter() const noexcept { edges_ = 0; }

 private:
  void update(Node* n) const;
  void rotate_left(std::unique_ptr<Node>& slot) const;
  void rotate_right(std::unique_ptr<Node>& slot) const;
  bool insert_at(std::unique_ptr<Node>& slot, Node* parent, const Item& item);
  bool erase_at(std::unique_ptr<Node>& slot, const Item& item);
  void remove_node(std::unique_ptr<Node>& slot);
  void finish_build(Node* n) const;

  std::optional<Digest> combine(const std::optional<Digest>& left, const Digest& middle,
                                const std::optional<Digest>& right) const;
  std::optional<Digest> range_label(const Item* lo, const Item* hi) const;
  std::optional<Digest> aggregate_left(const Node* t, const Item& x) const;
  std::optional<Digest> aggregate_right(const Node* t, const Item& y) const;

  HashFunction hash_;
  PriorityFn priority_;
  std::unique_ptr<Node> root_;
  mutable std::uint64_t edges_ = 0;
};

// True when `a` outranks `b` in the treap heap order.
bool priority_outranks(const Digest& a_priority, const Item& a, const Digest& b_priority,
                       const Item& b) noexcept;

// floor(priority * n / 2^256): the bucket of `priority` when the digest
// space is cut into n equal slices.
std::size_t priority_bucket(const Digest& priority, std::size_t n);

// n strictly ascending items whose priorities fall into ascending buckets,
// item i in bucket i. The treap on them is a path of height n. Candidates
// are consecutive integers from a seed-derived start, so the expected cost
// is O(n^2) hash evaluations. Requires item_width >= 8.
std::vector<Item> adversarial_sequence(std::size_t n, std::uint64_t seed,
                                       std::size_t item_width = kDefaultItemWidth,
                                       const HashFunction& hash = HashFunction::sha256());

}  // namespace rbsr
