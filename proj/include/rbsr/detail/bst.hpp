#pragma once

// Order-statistic helpers shared by the monoid tree and the Merkle treap.
// Node types provide: value, left, right (unique_ptr), parent, size,
// max_node (rightmost vertex of the subtree).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rbsr/item.hpp"

namespace rbsr::detail {

// Moves `t` to `next`, counting one traversed edge if `next` is a vertex.
template <class N>
void step(const N*& t, const N* next, std::uint64_t& edges) noexcept {
  if (next) ++edges;
  t = next;
}

template <class N>
std::size_t size_of(const N* n) noexcept {
  return n ? n->size : 0;
}

template <class N>
const N* leftmost(const N* n) noexcept {
  while (n && n->left) n = n->left.get();
  return n;
}

// Number of stored values strictly below x.
template <class N>
std::size_t count_less(const N* t, const Item& x, std::uint64_t& edges) {
  std::size_t below = 0;
  while (t) {
    if (t->value < x) {
      below += size_of(t->left.get()) + 1;
      step(t, t->right.get(), edges);
    } else {
      step(t, t->left.get(), edges);
    }
  }
  return below;
}

template <class N>
const N* nth(const N* t, std::size_t i, std::uint64_t& edges) {
  while (t) {
    const std::size_t left = size_of(t->left.get());
    if (i < left) {
      step(t, t->left.get(), edges);
    } else if (i == left) {
      return t;
    } else {
      i -= left + 1;
      step(t, t->right.get(), edges);
    }
  }
  return nullptr;
}

// Least vertex whose value is >= x, or nullptr.
template <class N>
const N* lower_bound(const N* t, const Item& x, std::uint64_t& edges) {
  const N* best = nullptr;
  while (t) {
    if (t->value < x) {
      step(t, t->right.get(), edges);
    } else {
      best = t;
      step(t, t->left.get(), edges);
    }
  }
  return best;
}

// Appends values v with lo <= v < hi in ascending order; null bounds are
// unbounded.
template <class N>
void collect(const N* t, const Item* lo, const Item* hi, std::vector<Item>& out) {
  while (t) {
    if (lo && t->value < *lo) {
      t = t->right.get();
    } else if (hi && !(t->value < *hi)) {
      t = t->left.get();
    } else {
      collect(t->left.get(), lo, nullptr, out);
      out.push_back(t->value);
      collect(t->right.get(), nullptr, hi, out);
      return;
    }
  }
}

template <class N>
std::size_t height(const N* t) {
  if (!t) return 0;
  const std::size_t l = height(t->left.get());
  const std::size_t r = height(t->right.get());
  return 1 + (l > r ? l : r);
}

// Checks search order, parent links, sizes and subtree maxima. Returns an
// empty string when everything holds, otherwise a description of the
// first violation found.
template <class N>
std::string audit_structure(const N* t, const N* parent = nullptr, const Item* lo = nullptr,
                            const Item* hi = nullptr) {
  if (!t) return {};
  if (t->parent != parent) return "parent link broken at " + t->value.hex();
  if ((lo && !(*lo < t->value)) || (hi && !(t->value < *hi))) {
    return "search order violated at " + t->value.hex();
  }
  if (t->size != 1 + size_of(t->left.get()) + size_of(t->right.get())) {
    return "size mismatch at " + t->value.hex();
  }
  const N* expected_max = t->right ? t->right->max_node : t;
  if (t->max_node != expected_max) return "subtree max mismatch at " + t->value.hex();
  if (auto e = audit_structure(t->left.get(), t, lo, &t->value); !e.empty()) return e;
  return audit_structure(t->right.get(), t, &t->value, hi);
}

}  // namespace rbsr::detail
