#include "rbsr/merkle_treap.hpp"

#include <random>

#include "rbsr/detail/bst.hpp"
#include "rbsr/errors.hpp"

namespace rbsr {

struct MerkleTreap::Node {
  Item value;
  Digest priority{};
  Digest value_hash{};
  Digest label{};
  std::size_t size = 1;
  Node* parent = nullptr;
  const Node* max_node = this;
  std::unique_ptr<Node> left;
  std::unique_ptr<Node> right;
};

namespace {

using Node = MerkleTreap::Node;

constexpr std::uint8_t kPriorityDomain = 0x00;
constexpr std::uint8_t kLabelDomain = 0x01;
constexpr std::uint8_t kWrapTag = 0x02;

Digest priority_hash(const HashFunction& hash, const Item& item) {
  const std::uint8_t prefix[1] = {kPriorityDomain};
  return hash({ByteView(prefix), item.bytes()});
}

bool outranks(const Node* a, const Node* b) noexcept {
  return priority_outranks(a->priority, a->value, b->priority, b->value);
}

}  // namespace

bool priority_outranks(const Digest& a_priority, const Item& a, const Digest& b_priority,
                       const Item& b) noexcept {
  if (a_priority != b_priority) return a_priority > b_priority;
  return b < a;
}

MerkleTreap::MerkleTreap(HashFunction hash)
    : hash_(hash), priority_([hash](const Item& item) { return priority_hash(hash, item); }) {}

MerkleTreap::MerkleTreap(HashFunction hash, PriorityFn priority)
    : hash_(std::move(hash)), priority_(std::move(priority)) {}

MerkleTreap::~MerkleTreap() = default;
MerkleTreap::MerkleTreap(MerkleTreap&&) noexcept = default;
MerkleTreap& MerkleTreap::operator=(MerkleTreap&&) noexcept = default;

Digest MerkleTreap::label_hash(std::initializer_list<ByteView> pieces) const {
  // The hash interface takes an initializer list, so concatenate the
  // (at most four) pieces behind the domain byte.
  Bytes buffer{kLabelDomain};
  for (ByteView p : pieces) buffer.insert(buffer.end(), p.begin(), p.end());
  return hash_(ByteView(buffer));
}

Digest MerkleTreap::value_hash(const Item& item) const { return label_hash({item.bytes()}); }

std::optional<Digest> MerkleTreap::combine(const std::optional<Digest>& left, const Digest& middle,
                                           const std::optional<Digest>& right) const {
  if (!left && !right) return middle;
  if (left && !right) return label_hash({ByteView(*left), ByteView(middle)});
  if (!left) return label_hash({ByteView(middle), ByteView(*right)});
  return label_hash({ByteView(*left), ByteView(middle), ByteView(*right)});
}

void MerkleTreap::update(Node* n) const {
  const Node* l = n->left.get();
  const Node* r = n->right.get();
  n->size = 1 + detail::size_of(l) + detail::size_of(r);
  n->max_node = r ? r->max_node : n;
  std::optional<Digest> ll, rl;
  if (l) ll = l->label;
  if (r) rl = r->label;
  n->label = *combine(ll, n->value_hash, rl);
}

void MerkleTreap::rotate_left(std::unique_ptr<Node>& slot) const {
  std::unique_ptr<Node> pivot = std::move(slot->right);
  slot->right = std::move(pivot->left);
  if (slot->right) slot->right->parent = slot.get();
  pivot->parent = slot->parent;
  slot->parent = pivot.get();
  pivot->left = std::move(slot);
  slot = std::move(pivot);
  update(slot->left.get());
  update(slot.get());
}

void MerkleTreap::rotate_right(std::unique_ptr<Node>& slot) const {
  std::unique_ptr<Node> pivot = std::move(slot->left);
  slot->left = std::move(pivot->right);
  if (slot->left) slot->left->parent = slot.get();
  pivot->parent = slot->parent;
  slot->parent = pivot.get();
  pivot->right = std::move(slot);
  slot = std::move(pivot);
  update(slot->right.get());
  update(slot.get());
}

bool MerkleTreap::insert(const Item& item) { return insert_at(root_, nullptr, item); }

bool MerkleTreap::insert_at(std::unique_ptr<Node>& slot, Node* parent, const Item& item) {
  if (!slot) {
    slot = std::make_unique<Node>();
    slot->value = item;
    slot->priority = priority_(item);
    slot->value_hash = value_hash(item);
    slot->label = slot->value_hash;
    slot->parent = parent;
    return true;
  }
  const auto c = item_compare(item, slot->value);
  if (c == 0) return false;
  if (c < 0) {
    if (!insert_at(slot->left, slot.get(), item)) return false;
    if (outranks(slot->left.get(), slot.get())) {
      rotate_right(slot);
    } else {
      update(slot.get());
    }
  } else {
    if (!insert_at(slot->right, slot.get(), item)) return false;
    if (outranks(slot->right.get(), slot.get())) {
      rotate_left(slot);
    } else {
      update(slot.get());
    }
  }
  return true;
}

bool MerkleTreap::erase(const Item& item) { return erase_at(root_, item); }

bool MerkleTreap::erase_at(std::unique_ptr<Node>& slot, const Item& item) {
  if (!slot) return false;
  const auto c = item_compare(item, slot->value);
  if (c == 0) {
    remove_node(slot);
    return true;
  }
  if (!erase_at(c < 0 ? slot->left : slot->right, item)) return false;
  update(slot.get());
  return true;
}

// Rotates the vertex in `slot` down below its higher-priority child until
// it becomes a leaf, then drops it.
void MerkleTreap::remove_node(std::unique_ptr<Node>& slot) {
  Node* n = slot.get();
  if (!n->left && !n->right) {
    slot.reset();
    return;
  }
  if (!n->left || (n->right && outranks(n->right.get(), n->left.get()))) {
    rotate_left(slot);
    remove_node(slot->left);
  } else {
    rotate_right(slot);
    remove_node(slot->right);
  }
  update(slot.get());
}

MerkleTreap MerkleTreap::from_sorted(std::span<const Item> items, HashFunction hash,
                                     Execution exec) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (!(items[i - 1] < items[i])) throw UsageError("from_sorted requires strictly ascending items");
  }
  MerkleTreap treap(hash);
  std::vector<std::unique_ptr<Node>> nodes(items.size());
  for_each_index(items.size(), exec, [&](std::size_t i) {
    auto n = std::make_unique<Node>();
    n->value = items[i];
    n->priority = treap.priority_(items[i]);
    n->value_hash = treap.value_hash(items[i]);
    nodes[i] = std::move(n);
  });

  // Cartesian tree over the ascending items. The stack holds the right
  // spine; each unique_ptr is owned by its parent (or the stack bottom).
  std::vector<Node*> spine;
  std::unique_ptr<Node> root;
  for (auto& owned : nodes) {
    Node* current = owned.get();
    Node* last_popped = nullptr;
    while (!spine.empty() && outranks(current, spine.back())) {
      last_popped = spine.back();
      spine.pop_back();
    }
    if (last_popped) {
      // last_popped's subtree becomes current's left subtree.
      std::unique_ptr<Node> sub =
          last_popped->parent ? std::move(last_popped->parent->right) : std::move(root);
      sub->parent = current;
      current->left = std::move(sub);
    }
    if (spine.empty()) {
      current->parent = nullptr;
      root = std::move(owned);
    } else {
      current->parent = spine.back();
      spine.back()->right = std::move(owned);
    }
    spine.push_back(current);
  }
  treap.root_ = std::move(root);
  if (treap.root_) treap.finish_build(treap.root_.get());
  return treap;
}

void MerkleTreap::finish_build(Node* n) const {
  if (n->left) finish_build(n->left.get());
  if (n->right) finish_build(n->right.get());
  update(n);
}

bool MerkleTreap::contains(const Item& item) const {
  const Node* t = root_.get();
  while (t) {
    const auto c = item_compare(item, t->value);
    if (c == 0) return true;
    t = c < 0 ? t->left.get() : t->right.get();
  }
  return false;
}

std::size_t MerkleTreap::size() const noexcept { return detail::size_of(root_.get()); }

std::size_t MerkleTreap::height() const { return detail::height(root_.get()); }

const Item& MerkleTreap::min_item() const {
  if (!root_) throw UsageError("min_item of empty treap");
  return detail::leftmost(root_.get())->value;
}

const Item& MerkleTreap::max_item() const {
  if (!root_) throw UsageError("max_item of empty treap");
  return root_->max_node->value;
}

Digest MerkleTreap::root_fingerprint() const {
  return root_ ? root_->label : empty_fingerprint();
}

std::optional<Digest> MerkleTreap::range_label(const Item* lo, const Item* hi) const {
  const Node* t = root_.get();
  while (t) {
    if (lo && t->value < *lo) {
      detail::step(t, t->right.get(), edges_);
    } else if (hi && !(t->value < *hi)) {
      detail::step(t, t->left.get(), edges_);
    } else {
      break;
    }
  }
  if (!t) return std::nullopt;
  const Node* l = t->left.get();
  const Node* r = t->right.get();
  std::optional<Digest> left, right;
  if (lo) {
    left = aggregate_left(l, *lo);
  } else if (l) {
    left = l->label;
  }
  if (hi) {
    right = aggregate_right(r, *hi);
  } else if (r) {
    right = r->label;
  }
  return combine(left, t->value_hash, right);
}

// Label of the restriction of t to {z >= x}.
std::optional<Digest> MerkleTreap::aggregate_left(const Node* t, const Item& x) const {
  if (!t) return std::nullopt;
  ++edges_;
  std::optional<Digest> right;
  if (t->right) right = t->right->label;
  if (t->value < x) return aggregate_left(t->right.get(), x);
  if (t->value == x) return combine(std::nullopt, t->value_hash, right);
  return combine(aggregate_left(t->left.get(), x), t->value_hash, right);
}

// Label of the restriction of t to {z < y}.
std::optional<Digest> MerkleTreap::aggregate_right(const Node* t, const Item& y) const {
  if (!t) return std::nullopt;
  ++edges_;
  if (!(t->value < y)) return aggregate_right(t->left.get(), y);
  std::optional<Digest> left;
  if (t->left) left = t->left->label;
  return combine(left, t->value_hash, aggregate_right(t->right.get(), y));
}

Digest MerkleTreap::aggregate_range(const Item& x, const Item& y) const {
  if (root_ && (x.width() != root_->value.width() || y.width() != root_->value.width())) {
    throw UsageError("range boundary width does not match stored items");
  }
  if (x == y) return root_fingerprint();
  if (x < y) {
    auto label = range_label(&x, &y);
    return label ? *label : empty_fingerprint();
  }
  const auto high = range_label(&x, nullptr);
  const auto low = range_label(nullptr, &y);
  if (!high && !low) return empty_fingerprint();
  const std::uint8_t tag[1] = {kWrapTag};
  if (high && low) return label_hash({ByteView(tag), ByteView(*high), ByteView(*low)});
  return label_hash({ByteView(tag), ByteView(high ? *high : *low)});
}

std::size_t MerkleTreap::rank_of(const Item& x) const {
  return detail::count_less(root_.get(), x, edges_);
}

std::size_t MerkleTreap::count_range(const RangeBounds& r) const {
  const std::size_t n = size();
  if (range_is_full(r)) return n;
  const std::size_t lo = rank_of(r.lower);
  const std::size_t hi = rank_of(r.upper);
  return r.lower < r.upper ? hi - lo : n - (lo - hi);
}

std::vector<Item> MerkleTreap::items_in_range(const RangeBounds& r) const {
  std::vector<Item> out;
  const Node* root = root_.get();
  if (r.lower < r.upper) {
    detail::collect(root, &r.lower, &r.upper, out);
  } else {
    const Item& stop = range_is_full(r) ? r.lower : r.upper;
    detail::collect(root, &r.lower, nullptr, out);
    detail::collect(root, nullptr, &stop, out);
  }
  return out;
}

const Item& MerkleTreap::item_by_rank(std::size_t i) const {
  if (i >= size()) throw UsageError("rank out of range");
  return detail::nth(root_.get(), i, edges_)->value;
}

const Item& MerkleTreap::rank_in_range(const Item& x, std::size_t i) const {
  const std::size_t n = size();
  if (i >= n) throw UsageError("rank out of range");
  return item_by_rank((rank_of(x) + i) % n);
}

std::vector<Item> MerkleTreap::contents() const {
  std::vector<Item> out;
  out.reserve(size());
  detail::collect<Node>(root_.get(), nullptr, nullptr, out);
  return out;
}

namespace {

std::string audit_treap(const MerkleTreap& treap, const Node* n) {
  if (!n) return {};
  for (const Node* c : {n->left.get(), n->right.get()}) {
    if (c && outranks(c, n)) return "heap order violated below " + n->value.hex();
  }
  if (n->priority != treap.priority_of(n->value)) return "stale priority at " + n->value.hex();
  if (n->value_hash != treap.value_hash(n->value)) return "stale value hash at " + n->value.hex();
  Digest expected;
  if (!n->left && !n->right) {
    expected = n->value_hash;
  } else if (!n->right) {
    expected = treap.label_hash({ByteView(n->left->label), ByteView(n->value_hash)});
  } else if (!n->left) {
    expected = treap.label_hash({ByteView(n->value_hash), ByteView(n->right->label)});
  } else {
    expected = treap.label_hash(
        {ByteView(n->left->label), ByteView(n->value_hash), ByteView(n->right->label)});
  }
  if (n->label != expected) return "label mismatch at " + n->value.hex();
  if (auto e = audit_treap(treap, n->left.get()); !e.empty()) return e;
  return audit_treap(treap, n->right.get());
}

}  // namespace

std::string MerkleTreap::audit() const {
  if (auto e = detail::audit_structure<Node>(root_.get()); !e.empty()) return e;
  return audit_treap(*this, root_.get());
}

__extension__ typedef unsigned __int128 uint128;

std::size_t priority_bucket(const Digest& priority, std::size_t n) {
  uint128 carry = 0;
  for (std::size_t i = priority.size(); i-- > 0;) {
    const uint128 acc = static_cast<uint128>(priority[i]) * n + carry;
    carry = acc >> 8;
  }
  return static_cast<std::size_t>(carry);
}

std::vector<Item> adversarial_sequence(std::size_t n, std::uint64_t seed, std::size_t item_width,
                                       const HashFunction& hash) {
  if (n == 0) throw UsageError("adversarial_sequence requires n >= 1");
  if (item_width < 8) throw UsageError("adversarial_sequence requires item_width >= 8");
  std::mt19937_64 rng(seed);
  // Leave headroom so the candidate counter never overflows 64 bits.
  std::uint64_t candidate = rng() >> 8;
  std::vector<Item> out;
  out.reserve(n);
  while (out.size() < n) {
    Item item = Item::from_uint(candidate++, item_width);
    if (priority_bucket(priority_hash(hash, item), n) == out.size()) out.push_back(std::move(item));
  }
  return out;
}

}  // namespace rbsr
