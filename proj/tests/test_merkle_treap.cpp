#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rbsr/merkle_treap.hpp"

using namespace rbsr;
using oracle::w1;

namespace {

// Computed with Python's hashlib from the labeling rules.
constexpr const char* kEmpty = "4bf5122f344554c53bde2ebb8cd2b7e3d1600ad631c385a5d7cce23c7785459a";
constexpr const char* kLeaf01 = "9dcf97a184f32623d11a73124ceb99a5709b083721e878a16d78f596718ba7b2";
constexpr const char* kPair0102 = "4138a5223cf8c7ceff29beb398b5e0a070f52763af52c7356abba97e1366ab50";
constexpr const char* kOneToTen = "4479be40543db0dfc26e964d5fc12ab7ad2d4db3a3d54c06cca1d3296bb8c89d";

const HashFunction kHash = HashFunction::sha256();

Digest oracle_label(const std::vector<Item>& items) {
  const auto l = oracle::treap_label(kHash, items);
  return l ? *l : kHash(ByteView(Bytes{0x01}));
}

// Wrapped fingerprint: h(0x02 || high || low), absent halves omitted.
Digest oracle_wrapped(const std::vector<Item>& sorted, const Item& x, const Item& y) {
  std::vector<Item> high, low;
  for (const Item& s : sorted) {
    if (!(s < x)) high.push_back(s);
    else if (s < y) low.push_back(s);
  }
  const auto a = oracle::treap_label(kHash, high);
  const auto b = oracle::treap_label(kHash, low);
  if (!a && !b) return oracle_label({});
  Bytes cat{0x01, 0x02};
  if (a) cat.insert(cat.end(), a->begin(), a->end());
  if (b) cat.insert(cat.end(), b->begin(), b->end());
  return kHash(ByteView(cat));
}

}  // namespace

TEST_CASE("known labels") {
  MerkleTreap t;
  CHECK(to_hex(t.root_fingerprint()) == kEmpty);
  CHECK(to_hex(t.empty_fingerprint()) == kEmpty);
  t.insert(w1(1));
  CHECK(to_hex(t.root_fingerprint()) == kLeaf01);
  t.insert(w1(2));
  CHECK(to_hex(t.root_fingerprint()) == kPair0102);
  for (int i = 3; i <= 10; ++i) t.insert(w1(i));
  CHECK(to_hex(t.root_fingerprint()) == kOneToTen);
  CHECK(t.audit().empty());
}

TEST_CASE("two-node label puts the lower-priority item on its side") {
  const Item u = w1(1), v = w1(2);
  const std::uint8_t zero[1] = {0}, one[1] = {1};
  const Digest pu = kHash({ByteView(zero), u.bytes()});
  const Digest pv = kHash({ByteView(zero), v.bytes()});
  const Digest hu = kHash({ByteView(one), u.bytes()});
  const Digest hv = kHash({ByteView(one), v.bytes()});
  // The item of higher priority is the root; the other is its child.
  const bool v_root = pv > pu;
  Bytes cat;
  const Digest& root = v_root ? hv : hu;
  const Digest& child = v_root ? hu : hv;
  if (v_root) cat.insert(cat.end(), child.begin(), child.end());
  cat.insert(cat.end(), root.begin(), root.end());
  if (!v_root) cat.insert(cat.end(), child.begin(), child.end());
  const Digest expected = kHash({ByteView(one), ByteView(cat)});
  MerkleTreap t;
  t.insert(v);
  t.insert(u);
  CHECK(t.root_fingerprint() == expected);
}

TEST_CASE("all six insertion orders of three items give one label") {
  std::vector<int> order{0x61, 0x62, 0x63};
  std::set<Digest> labels;
  do {
    MerkleTreap t;
    for (int v : order) t.insert(w1(v));
    REQUIRE(t.audit().empty());
    labels.insert(t.root_fingerprint());
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(labels.size() == 1);
}

TEST_CASE("delete then reinsert restores the label") {
  std::mt19937_64 rng(4);
  const auto items = oracle::random_sorted(200, 4, rng);
  auto t = MerkleTreap::from_sorted(items);
  const Digest before = t.root_fingerprint();
  for (std::size_t i = 0; i < items.size(); i += 3) CHECK(t.erase(items[i]));
  CHECK(t.audit().empty());
  for (std::size_t i = 0; i < items.size(); i += 3) CHECK(t.insert(items[i]));
  CHECK(t.root_fingerprint() == before);
  CHECK_FALSE(t.insert(items[0]));
  CHECK_FALSE(t.erase(Item::zero(4)));
}

TEST_CASE("forced priority ties rank the smaller item lower") {
  const auto constant = [](const Item&) { return Digest{}; };
  MerkleTreap t(kHash, constant);
  for (int v : {5, 1, 9, 3, 7}) t.insert(w1(v));
  CHECK(t.audit().empty());
  // Equal priorities order by item, so the largest item is the root and
  // the tree is a left path: label is a chain of left-child hashes.
  const std::uint8_t one[1] = {1};
  auto h = [&](ByteView d) { return kHash({ByteView(one), d}); };
  Digest label = h(w1(1).bytes());
  for (int v : {3, 5, 7, 9}) {
    const Digest hv = h(w1(v).bytes());
    Bytes cat(label.begin(), label.end());
    cat.insert(cat.end(), hv.begin(), hv.end());
    label = h(cat);
  }
  CHECK(t.root_fingerprint() == label);
  CHECK(t.height() == 5);

  MerkleTreap u(kHash, constant);
  for (int v : {9, 7, 5, 3, 1}) u.insert(w1(v));
  CHECK(u.root_fingerprint() == t.root_fingerprint());
}

TEST_CASE("range labels equal the label of a treap built on the range") {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 200; ++round) {
    const auto items = oracle::random_sorted(rng() % 48, 2, rng);
    const auto t = MerkleTreap::from_sorted(items);
    REQUIRE(t.audit().empty());
    REQUIRE(t.root_fingerprint() == oracle_label(items));
    for (int q = 0; q < 10; ++q) {
      const Item x = oracle::random_item(2, rng);
      const Item y = q == 0 ? x : oracle::random_item(2, rng);
      Digest expected;
      if (x == y) expected = oracle_label(items);
      else if (x < y) expected = oracle_label(oracle::range_contents(items, x, y));
      else expected = oracle_wrapped(items, x, y);
      REQUIRE(t.aggregate_range(x, y) == expected);
      REQUIRE(t.items_in_range({x, y}) == oracle::range_contents(items, x, y));
      REQUIRE(t.count_range({x, y}) == oracle::range_contents(items, x, y).size());
    }
  }
}

TEST_CASE("bulk build matches incremental inserts and the serial reference") {
  std::mt19937_64 rng(2);
  auto items = oracle::random_sorted(3000, 8, rng);
  const auto parallel = MerkleTreap::from_sorted(items, kHash, Execution::parallel);
  const auto serial = MerkleTreap::from_sorted(items, kHash, Execution::serial);
  std::shuffle(items.begin(), items.end(), rng);
  MerkleTreap incremental;
  for (const Item& i : items) incremental.insert(i);
  CHECK(parallel.root_fingerprint() == serial.root_fingerprint());
  CHECK(parallel.root_fingerprint() == incremental.root_fingerprint());
  CHECK(parallel.height() == incremental.height());
  CHECK(parallel.audit().empty());
}

TEST_CASE("random 512-item treaps stay shallow") {
  int tall = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const auto t = MerkleTreap::from_sorted(oracle::random_sorted(512, 8, rng));
    if (t.height() > 4 * 9) ++tall;
  }
  CHECK(tall == 0);
}

TEST_CASE("adversarial sequences produce paths") {
  const auto one = adversarial_sequence(1, 0, 8);
  CHECK(one.size() == 1);
  const auto seq = adversarial_sequence(64, 3, 8);
  CHECK(std::is_sorted(seq.begin(), seq.end()));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::uint8_t zero[1] = {0};
    CHECK(priority_bucket(kHash({ByteView(zero), seq[i].bytes()}), seq.size()) == i);
  }
  CHECK(MerkleTreap::from_sorted(seq).height() == 64);
  CHECK_THROWS(adversarial_sequence(4, 0, 4));
}

TEST_CASE("priority buckets split the digest space evenly") {
  Digest d{};
  CHECK(priority_bucket(d, 10) == 0);
  d.fill(0xff);
  CHECK(priority_bucket(d, 10) == 9);
  d = Digest{};
  d[0] = 0x80;
  CHECK(priority_bucket(d, 2) == 1);
  CHECK(priority_bucket(d, 4) == 2);
  d[0] = 0x7f;
  d[1] = 0xff;
  CHECK(priority_bucket(d, 2) == 0);
}

TEST_CASE("distinct small sets never share a label") {
  std::set<Digest> labels;
  // Every subset of an 8-value universe at width 1.
  for (int mask = 0; mask < 256; ++mask) {
    MerkleTreap t;
    for (int b = 0; b < 8; ++b) {
      if (mask & (1 << b)) t.insert(w1(b * 31));
    }
    labels.insert(t.root_fingerprint());
  }
  CHECK(labels.size() == 256);
}
