#include "rbsr/monoid_tree.hpp"

#include <algorithm>
#include <cmath>

#include "rbsr/detail/bst.hpp"
#include "rbsr/errors.hpp"

namespace rbsr {

struct MonoidTree::Node {
  Item value;
  Fingerprint projected;
  Fingerprint label;
  std::size_t size = 1;
  int height = 1;
  Node* parent = nullptr;
  const Node* max_node = this;
  std::unique_ptr<Node> left;
  std::unique_ptr<Node> right;
};

namespace {

using Node = MonoidTree::Node;

int height_of(const Node* n) noexcept { return n ? n->height : 0; }

}  // namespace

const Item& MonoidTree::RangeCursor::item() const {
  if (!node_) throw UsageError("exhausted cursor has no item");
  return node_->value;
}

MonoidTree::MonoidTree(FingerprintScheme scheme) : scheme_(std::move(scheme)) {}
MonoidTree::~MonoidTree() = default;
MonoidTree::MonoidTree(MonoidTree&&) noexcept = default;
MonoidTree& MonoidTree::operator=(MonoidTree&&) noexcept = default;

MonoidTree MonoidTree::from_sorted(FingerprintScheme scheme, std::span<const Item> items,
                                   Execution exec) {
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (!(items[i - 1] < items[i])) throw UsageError("from_sorted requires strictly ascending items");
  }
  MonoidTree tree(std::move(scheme));
  std::vector<Fingerprint> projected(items.size());
  for_each_index(items.size(), exec,
                 [&](std::size_t i) { projected[i] = tree.scheme_.project(items[i]); });
  tree.root_ = tree.build(items, projected, nullptr);
  return tree;
}

std::unique_ptr<Node> MonoidTree::build(std::span<const Item> items,
                                        std::span<Fingerprint> projected, Node* parent) const {
  if (items.empty()) return nullptr;
  const std::size_t mid = items.size() / 2;
  auto node = std::make_unique<Node>();
  node->value = items[mid];
  node->projected = std::move(projected[mid]);
  node->parent = parent;
  node->left = build(items.first(mid), projected.first(mid), node.get());
  node->right = build(items.subspan(mid + 1), projected.subspan(mid + 1), node.get());
  update(node.get());
  return node;
}

Fingerprint MonoidTree::label_of(const Node* n) const { return n ? n->label : scheme_.neutral(); }

void MonoidTree::update(Node* n) const {
  const Node* l = n->left.get();
  const Node* r = n->right.get();
  n->size = 1 + detail::size_of(l) + detail::size_of(r);
  n->height = 1 + std::max(height_of(l), height_of(r));
  n->max_node = r ? r->max_node : n;
  Fingerprint acc = l ? scheme_.combine(l->label, n->projected) : n->projected;
  n->label = r ? scheme_.combine(acc, r->label) : std::move(acc);
}

void MonoidTree::rotate_left(std::unique_ptr<Node>& slot) {
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

void MonoidTree::rotate_right(std::unique_ptr<Node>& slot) {
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

void MonoidTree::rebalance(std::unique_ptr<Node>& slot) {
  Node* n = slot.get();
  const int balance = height_of(n->left.get()) - height_of(n->right.get());
  if (balance > 1) {
    if (height_of(n->left->left.get()) < height_of(n->left->right.get())) rotate_left(n->left);
    rotate_right(slot);
  } else if (balance < -1) {
    if (height_of(n->right->right.get()) < height_of(n->right->left.get())) rotate_right(n->right);
    rotate_left(slot);
  } else {
    update(n);
  }
}

bool MonoidTree::insert(const Item& item) { return insert_at(root_, nullptr, item); }

bool MonoidTree::insert_at(std::unique_ptr<Node>& slot, Node* parent, const Item& item) {
  if (!slot) {
    slot = std::make_unique<Node>();
    slot->value = item;
    slot->projected = scheme_.project(item);
    slot->label = slot->projected;
    slot->parent = parent;
    return true;
  }
  const auto c = item_compare(item, slot->value);
  if (c == 0) return false;
  const bool added = insert_at(c < 0 ? slot->left : slot->right, slot.get(), item);
  if (added) rebalance(slot);
  return added;
}

bool MonoidTree::erase(const Item& item) { return erase_at(root_, item); }

bool MonoidTree::erase_at(std::unique_ptr<Node>& slot, const Item& item) {
  if (!slot) return false;
  const auto c = item_compare(item, slot->value);
  bool removed = false;
  if (c < 0) {
    removed = erase_at(slot->left, item);
  } else if (c > 0) {
    removed = erase_at(slot->right, item);
  } else {
    if (!slot->left || !slot->right) {
      std::unique_ptr<Node> child = std::move(slot->left ? slot->left : slot->right);
      if (child) child->parent = slot->parent;
      slot = std::move(child);
      return true;
    }
    const Node* successor = detail::leftmost(slot->right.get());
    slot->value = successor->value;
    slot->projected = successor->projected;
    erase_min(slot->right);
    removed = true;
  }
  if (removed) rebalance(slot);
  return removed;
}

void MonoidTree::erase_min(std::unique_ptr<Node>& slot) {
  if (!slot->left) {
    std::unique_ptr<Node> child = std::move(slot->right);
    if (child) child->parent = slot->parent;
    slot = std::move(child);
    return;
  }
  erase_min(slot->left);
  rebalance(slot);
}

bool MonoidTree::contains(const Item& item) const {
  const Node* t = root_.get();
  while (t) {
    const auto c = item_compare(item, t->value);
    if (c == 0) return true;
    t = c < 0 ? t->left.get() : t->right.get();
  }
  return false;
}

std::size_t MonoidTree::size() const noexcept { return detail::size_of(root_.get()); }

const Item& MonoidTree::min_item() const {
  if (!root_) throw UsageError("min_item of empty tree");
  return detail::leftmost(root_.get())->value;
}

const Item& MonoidTree::max_item() const {
  if (!root_) throw UsageError("max_item of empty tree");
  return root_->max_node->value;
}

std::size_t MonoidTree::height() const { return detail::height(root_.get()); }

const Fingerprint& MonoidTree::root_label() const noexcept {
  return root_ ? root_->label : scheme_.neutral();
}

// Folds {v : lo <= v < hi}; a null bound is unbounded on that side.
Fingerprint MonoidTree::fold_bounded(const Item* lo, const Item* hi, std::uint64_t& edges) const {
  const Node* t = root_.get();
  while (t) {
    if (lo && t->value < *lo) {
      detail::step(t, t->right.get(), edges);
    } else if (hi && !(t->value < *hi)) {
      detail::step(t, t->left.get(), edges);
    } else {
      break;
    }
  }
  if (!t) return scheme_.neutral();

  const Node* l = t->left.get();
  const Node* r = t->right.get();
  if (l) ++edges;
  Fingerprint left_acc = lo ? aggregate_left(l, *lo, edges) : label_of(l);
  if (r) ++edges;
  Fingerprint right_acc = hi ? aggregate_right(r, *hi, edges) : label_of(r);
  return scheme_.combine(left_acc, t->projected, right_acc);
}

// Fold of {z in t : z >= x}, accumulated right to left.
Fingerprint MonoidTree::aggregate_left(const Node* t, const Item& x, std::uint64_t& edges) const {
  Fingerprint acc = scheme_.neutral();
  while (t) {
    if (t->value < x) {
      detail::step(t, t->right.get(), edges);
    } else if (t->value == x) {
      return scheme_.combine(t->projected, label_of(t->right.get()), acc);
    } else {
      acc = scheme_.combine(t->projected, label_of(t->right.get()), acc);
      detail::step(t, t->left.get(), edges);
    }
  }
  return acc;
}

// Fold of {z in t : z < y}, accumulated left to right.
Fingerprint MonoidTree::aggregate_right(const Node* t, const Item& y, std::uint64_t& edges) const {
  Fingerprint acc = scheme_.neutral();
  while (t) {
    if (t->value < y) {
      acc = scheme_.combine(acc, label_of(t->left.get()), t->projected);
      detail::step(t, t->right.get(), edges);
    } else {
      detail::step(t, t->left.get(), edges);
    }
  }
  return acc;
}

Fingerprint MonoidTree::aggregate_range_counted(const Item& x, const Item& y,
                                                std::uint64_t& edges) const {
  if (root_) {
    if (x.width() != root_->value.width() || y.width() != root_->value.width()) {
      throw UsageError("range boundary width does not match stored items");
    }
  }
  if (x == y) return root_label();
  if (x < y) return fold_bounded(&x, &y, edges);
  Fingerprint high = fold_bounded(&x, nullptr, edges);
  Fingerprint low = fold_bounded(nullptr, &y, edges);
  return scheme_.combine(high, low);
}

Fingerprint MonoidTree::aggregate_range(const Item& x, const Item& y) const {
  return aggregate_range_counted(x, y, edges_);
}

MonoidTree::RangeCursor MonoidTree::seek(const Item& x) const {
  return RangeCursor(detail::lower_bound(root_.get(), x, edges_));
}

std::pair<Fingerprint, MonoidTree::RangeCursor> MonoidTree::aggregate_until(
    RangeCursor cursor, const Item& x, const Item& y) const {
  if (!(x < y)) throw UsageError("aggregate_until requires x < y");
  Fingerprint acc = scheme_.neutral();
  const Node* t = cursor.node_;
  if (!t) return {std::move(acc), RangeCursor()};

  // Upward phase: climb until the subtree reaches y.
  while (t->max_node->value < y) {
    if (!(t->value < x)) acc = scheme_.combine(acc, t->projected, label_of(t->right.get()));
    if (!t->parent) return {std::move(acc), RangeCursor()};
    t = t->parent;
    ++edges_;
  }
  if (!(t->value < y)) return {std::move(acc), RangeCursor(t)};

  // Downward phase through the right subtree toward the successor of y.
  acc = scheme_.combine(acc, t->projected);
  t = t->right.get();
  if (t) ++edges_;
  while (t) {
    if (t->value < y) {
      acc = scheme_.combine(acc, label_of(t->left.get()), t->projected);
      detail::step(t, t->right.get(), edges_);
    } else if (!t->left || t->left->max_node->value < y) {
      return {scheme_.combine(acc, label_of(t->left.get())), RangeCursor(t)};
    } else {
      detail::step(t, t->left.get(), edges_);
    }
  }
  return {std::move(acc), RangeCursor()};
}

std::vector<Fingerprint> MonoidTree::aggregate_ascending(
    std::span<const RangeBounds> ranges) const {
  std::vector<Fingerprint> out;
  out.reserve(ranges.size());
  RangeCursor cursor;
  const Item* previous_upper = nullptr;
  for (const RangeBounds& r : ranges) {
    const bool sweepable = r.lower < r.upper && (!previous_upper || !(r.lower < *previous_upper));
    if (!sweepable) {
      out.push_back(aggregate_range(r));
      continue;
    }
    if (!previous_upper) {
      cursor = seek(r.lower);
    } else if (!cursor.exhausted() && cursor.item() < r.lower) {
      cursor = aggregate_until(cursor, cursor.item(), r.lower).second;
    }
    auto [fp, next] = aggregate_until(cursor, r.lower, r.upper);
    out.push_back(std::move(fp));
    cursor = next;
    previous_upper = &r.upper;
  }
  return out;
}

std::vector<Fingerprint> MonoidTree::aggregate_batch(std::span<const RangeBounds> ranges,
                                                     Execution exec) const {
  std::vector<Fingerprint> out(ranges.size());
  std::vector<std::uint64_t> edges(ranges.size(), 0);
  for_each_index(ranges.size(), exec, [&](std::size_t i) {
    out[i] = aggregate_range_counted(ranges[i].lower, ranges[i].upper, edges[i]);
  });
  for (std::uint64_t e : edges) edges_ += e;
  return out;
}

std::size_t MonoidTree::rank_of(const Item& x) const {
  return detail::count_less(root_.get(), x, edges_);
}

std::size_t MonoidTree::count_range(const RangeBounds& r) const {
  const std::size_t n = size();
  if (range_is_full(r)) return n;
  const std::size_t lo = rank_of(r.lower);
  const std::size_t hi = rank_of(r.upper);
  return r.lower < r.upper ? hi - lo : n - (lo - hi);
}

std::vector<Item> MonoidTree::items_in_range(const RangeBounds& r) const {
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

const Item& MonoidTree::item_by_rank(std::size_t i) const {
  if (i >= size()) throw UsageError("rank out of range");
  return detail::nth(root_.get(), i, edges_)->value;
}

const Item& MonoidTree::rank_in_range(const Item& x, std::size_t i) const {
  const std::size_t n = size();
  if (i >= n) throw UsageError("rank out of range");
  return item_by_rank((rank_of(x) + i) % n);
}

std::vector<Item> MonoidTree::contents() const {
  std::vector<Item> out;
  out.reserve(size());
  detail::collect<Node>(root_.get(), nullptr, nullptr, out);
  return out;
}

namespace {

std::string audit_labels(const MonoidTree& tree, const Node* n) {
  if (!n) return {};
  const FingerprintScheme& s = tree.scheme();
  const Fingerprint expected =
      s.combine(n->left ? n->left->label : s.neutral(), n->projected,
                n->right ? n->right->label : s.neutral());
  if (n->label != expected) return "label mismatch at " + n->value.hex();
  if (n->projected != s.project(n->value)) return "stale projection at " + n->value.hex();
  const int hl = height_of(n->left.get());
  const int hr = height_of(n->right.get());
  if (n->height != 1 + std::max(hl, hr)) return "height field wrong at " + n->value.hex();
  if (std::abs(hl - hr) > 1) return "AVL balance violated at " + n->value.hex();
  if (auto e = audit_labels(tree, n->left.get()); !e.empty()) return e;
  return audit_labels(tree, n->right.get());
}

}  // namespace

std::string MonoidTree::audit() const {
  if (auto e = detail::audit_structure<Node>(root_.get()); !e.empty()) return e;
  return audit_labels(*this, root_.get());
}

}  // namespace rbsr
