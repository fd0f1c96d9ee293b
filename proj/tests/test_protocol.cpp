#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "rbsr/errors.hpp"
#include "rbsr/protocol.hpp"
#include "rbsr/range_store.hpp"
#include "rbsr/simulate.hpp"

using namespace rbsr;
using oracle::w1;

namespace {

Item letter(char c) { return w1(static_cast<unsigned char>(c)); }

std::vector<Item> letters(const std::string& s) {
  std::vector<Item> out;
  for (char c : s) out.push_back(letter(c));
  return out;
}

SessionConfig w1_config(std::uint8_t scheme = kSchemeXor256) {
  SessionConfig c;
  c.item_width = 1;
  c.scheme_id = scheme;
  return c;
}

Fingerprint xor_fp(const std::string& s) { return lift_oracle(make_xor_scheme(), letters(s)); }

const RangeItemSetPart& as_set(const MessagePart& p) { return std::get<RangeItemSetPart>(p); }
const RangeFingerprintPart& as_fp(const MessagePart& p) {
  return std::get<RangeFingerprintPart>(p);
}

}  // namespace

TEST_CASE("the eight-letter example, message by message") {
  const Item zero = Item::zero(1);
  auto store0 = make_store(kSchemeXor256, 1, letters("bcdefh"));
  auto store1 = make_store(kSchemeXor256, 1, letters("aefg"));
  Session node0(*store0, w1_config(), Role::responder);
  Session node1(*store1, w1_config(), Role::initiator);

  const Message m1 = node1.initiate();
  REQUIRE(m1.parts.size() == 1);
  CHECK(as_fp(m1.parts[0]) == RangeFingerprintPart{zero, zero, xor_fp("aefg")});

  const auto m2 = node0.handle_message(m1);
  REQUIRE(m2);
  REQUIRE(m2->parts.size() == 2);
  CHECK(as_fp(m2->parts[0]) == RangeFingerprintPart{zero, letter('e'), xor_fp("bcd")});
  CHECK(as_fp(m2->parts[1]) == RangeFingerprintPart{letter('e'), zero, xor_fp("efh")});

  const auto m3 = node1.handle_message(*m2);
  REQUIRE(m3);
  REQUIRE(m3->parts.size() == 3);
  CHECK(as_set(m3->parts[0]) == RangeItemSetPart{zero, letter('e'), letters("a"), false});
  CHECK(as_fp(m3->parts[1]) == RangeFingerprintPart{letter('e'), letter('g'), xor_fp("ef")});
  CHECK(as_set(m3->parts[2]) == RangeItemSetPart{letter('g'), zero, letters("g"), false});

  const auto m4 = node0.handle_message(*m3);
  REQUIRE(m4);
  REQUIRE(m4->parts.size() == 2);
  CHECK(as_set(m4->parts[0]) == RangeItemSetPart{zero, letter('e'), letters("bcd"), true});
  CHECK(as_set(m4->parts[1]) == RangeItemSetPart{letter('g'), zero, letters("h"), true});
  CHECK_FALSE(node0.is_complete());

  CHECK_FALSE(node1.handle_message(*m4));
  CHECK(node1.is_complete());
  CHECK(store0->contents() == letters("abcdefgh"));
  CHECK(store1->contents() == letters("abcdefgh"));
  CHECK_THROWS_AS(node1.handle_message(*m4), UsageError);
}

TEST_CASE("initiation") {
  auto empty = make_store(kSchemeXor256, 1, {});
  Session s(*empty, w1_config(), Role::initiator);
  CHECK_FALSE(s.is_complete());
  const Message m = s.initiate();
  REQUIRE(m.parts.size() == 1);
  CHECK(as_fp(m.parts[0]) == RangeFingerprintPart{Item::zero(1), Item::zero(1),
                                                  make_xor_scheme().neutral()});
  CHECK_THROWS_AS(s.initiate(), UsageError);
}

TEST_CASE("equal stores finish after one message") {
  auto a = make_store(kSchemeXor256, 1, letters("abc"));
  auto b = make_store(kSchemeXor256, 1, letters("abc"));
  Session i(*a, w1_config(), Role::initiator);
  Session r(*b, w1_config(), Role::responder);
  CHECK_FALSE(r.handle_message(i.initiate()));
  CHECK(r.is_complete());
}

TEST_CASE("an empty-set fingerprint is answered with every local item") {
  auto empty = make_store(kSchemeXor256, 1, {});
  auto full = make_store(kSchemeXor256, 1, letters("abcdefg"));
  Session i(*empty, w1_config(), Role::initiator);
  Session r(*full, w1_config(), Role::responder);
  const auto resp = r.handle_message(i.initiate());
  REQUIRE(resp);
  REQUIRE(resp->parts.size() == 1);
  CHECK(as_set(resp->parts[0]).items == letters("abcdefg"));
  CHECK_FALSE(as_set(resp->parts[0]).is_response);
}

TEST_CASE("an anchor ships an empty item set when nothing is local") {
  // X has nothing in [c, e) but the peer does, below the threshold.
  auto store = make_store(kSchemeXor256, 1, letters("ag"));
  SessionConfig c = w1_config();
  c.threshold = 2;
  Session s(*store, c, Role::responder);
  const Message msg{{RangeFingerprintPart{letter('c'), letter('e'), xor_fp("d")}}};
  const auto resp = s.handle_message(msg);
  REQUIRE(resp);
  CHECK(as_set(resp->parts[0]) == RangeItemSetPart{letter('c'), letter('e'), {}, false});
}

TEST_CASE("split boundaries") {
  auto store = make_store(kSchemeXor256, 1, letters("abcdefg"));
  Session s(*store, w1_config(), Role::responder);
  const auto bounds = s.split_range(Item::zero(1), Item::zero(1), 7);
  REQUIRE(bounds.size() == 3);
  CHECK(store->count({bounds[0], bounds[1]}) == 4);
  CHECK(store->count({bounds[1], bounds[2]}) == 3);
  CHECK_THROWS_AS(s.split_range(letter('a'), letter('b'), 1), UsageError);

  auto two = make_store(kSchemeXor256, 1, letters("cx"));
  SessionConfig wide = w1_config();
  wide.branching = 4;
  Session t(*two, wide, Role::responder);
  const auto b2 = t.split_range(letter('a'), letter('z'), 2);
  REQUIRE(b2.size() == 3);
  CHECK(two->count({b2[0], b2[1]}) == 1);
  CHECK(two->count({b2[1], b2[2]}) == 1);

  SessionConfig shift = w1_config();
  shift.split = SplitStrategy::random_shift;
  shift.max_shift = 0;
  shift.branching = 3;
  SessionConfig equal = shift;
  equal.split = SplitStrategy::equal;
  Session a(*store, shift, Role::responder), e(*store, equal, Role::responder);
  CHECK(a.split_range(letter('b'), letter('a'), 7) == e.split_range(letter('b'), letter('a'), 7));
}

TEST_CASE("randomized splits keep every subrange nonempty") {
  std::mt19937_64 rng(12);
  auto items = oracle::random_sorted(60, 1, rng);
  auto store = make_store(kSchemeXor256, 1, items);
  for (auto strategy : {SplitStrategy::random_shift, SplitStrategy::random}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      SessionConfig c = w1_config();
      c.split = strategy;
      c.seed = seed;
      c.max_shift = 5;
      c.branching = 2 + seed % 5;
      Session s(*store, c, Role::responder);
      const Item lo = items[seed % items.size()];
      const Item hi = items[(seed * 7 + 3) % items.size()];
      const std::size_t count = store->count({lo, hi});
      if (count < 2) continue;
      const auto b = s.split_range(lo, hi, count);
      REQUIRE(b.size() >= 3);
      REQUIRE(b.size() <= c.branching + 1);
      std::size_t total = 0;
      for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        const std::size_t sub = store->count({b[j], b[j + 1]});
        REQUIRE(sub >= 1);
        total += sub;
      }
      REQUIRE(total == count);
    }
  }
}

TEST_CASE("malformed messages are rejected") {
  auto store = make_store(kSchemeXor256, 1, letters("ab"));
  const Fingerprint fp = xor_fp("a");
  auto reject = [&](const Message& m) {
    CHECK_THROWS_AS(validate_message(m, 1, 32), ProtocolError);
  };
  reject(Message{});
  reject(Message{{RangeFingerprintPart{letter('c'), letter('e'), fp},
                  RangeFingerprintPart{letter('a'), letter('c'), fp}}});
  reject(Message{{RangeFingerprintPart{letter('a'), letter('d'), fp},
                  RangeFingerprintPart{letter('c'), letter('e'), fp}}});
  reject(Message{{RangeFingerprintPart{letter('a'), letter('a'), fp},
                  RangeFingerprintPart{letter('c'), letter('e'), fp}}});
  reject(Message{{RangeFingerprintPart{letter('c'), letter('e'), fp},
                  RangeFingerprintPart{letter('f'), letter('d'), fp}}});
  reject(Message{{RangeFingerprintPart{letter('a'), letter('c'), Fingerprint(Bytes(5))}}});
  reject(Message{{RangeFingerprintPart{Item::zero(2), letter('c'), fp}}});
  reject(Message{{RangeItemSetPart{letter('a'), letter('f'), letters("db"), false}}});
  reject(Message{{RangeItemSetPart{letter('a'), letter('f'), letters("bb"), false}}});
  reject(Message{{RangeItemSetPart{letter('a'), letter('f'), letters("bg"), false}}});

  validate_message(Message{{RangeItemSetPart{letter('w'), letter('c'), letters("xzab"), false}}},
                   1, 32);
  validate_message(Message{{RangeFingerprintPart{letter('c'), letter('e'), fp},
                            RangeFingerprintPart{letter('e'), letter('c'), fp}}},
                   1, 32);

  Session s(*store, w1_config(), Role::responder);
  CHECK_THROWS_AS(s.handle_message(Message{}), ProtocolError);
}

TEST_CASE("session configuration is checked") {
  auto store = make_store(kSchemeXor256, 1, {});
  SessionConfig c = w1_config();
  c.branching = 1;
  CHECK_THROWS_AS(Session(*store, c, Role::initiator), ConfigError);
  c = w1_config();
  c.threshold = 0;
  CHECK_THROWS_AS(Session(*store, c, Role::initiator), ConfigError);
  c = w1_config(kSchemeSum256);
  CHECK_THROWS_AS(Session(*store, c, Role::initiator), ConfigError);
  c = w1_config();
  c.item_width = 2;
  CHECK_THROWS_AS(Session(*store, c, Role::initiator), ConfigError);
}

TEST_CASE("peers with different strategies and parameters still converge") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 40; ++round) {
    const auto x0 = oracle::random_sorted(rng() % 300, 8, rng);
    auto x1 = oracle::random_sorted(rng() % 300, 8, rng);
    x1.insert(x1.end(), x0.begin(), x0.begin() + static_cast<std::ptrdiff_t>(x0.size() / 2));
    std::sort(x1.begin(), x1.end());
    x1.erase(std::unique(x1.begin(), x1.end()), x1.end());
    SimulationConfig sim;
    for (int i = 0; i < 2; ++i) {
      sim.node[i].item_width = 8;
      sim.node[i].scheme_id = round % 2 ? kSchemeMerkleTreap256 : kSchemeSum256;
      sim.node[i].branching = 2 + rng() % 6;
      sim.node[i].threshold = 1 + rng() % 5;
      sim.node[i].split = static_cast<SplitStrategy>(rng() % 3);
      sim.node[i].max_shift = rng() % 4;
      sim.node[i].seed = rng();
    }
    sim.initiator = round % 2;
    const auto r = simulate(x0, x1, sim);
    std::vector<Item> expected;
    std::set_union(x0.begin(), x0.end(), x1.begin(), x1.end(), std::back_inserter(expected));
    REQUIRE(r.final0 == expected);
    REQUIRE(r.final1 == expected);
  }
}

TEST_CASE("with t = 1 no item crosses twice in the same direction") {
  std::mt19937_64 rng(30);
  for (int round = 0; round < 30; ++round) {
    const auto x0 = oracle::random_sorted(200, 8, rng);
    auto x1 = oracle::random_sorted(50, 8, rng);
    x1.insert(x1.end(), x0.begin(), x0.begin() + 120);
    std::sort(x1.begin(), x1.end());
    auto s0 = make_store(kSchemeXor256, 8, x0);
    auto s1 = make_store(kSchemeXor256, 8, x1);
    SessionConfig c;
    c.item_width = 8;
    Session a(*s0, c, Role::initiator), b(*s1, c, Role::responder);
    std::array<std::set<Item>, 2> sent;
    std::optional<Message> msg = a.initiate();
    int from = 0;
    std::array<Session*, 2> nodes{&a, &b};
    while (msg) {
      for (const auto& p : msg->parts) {
        if (const auto* set = std::get_if<RangeItemSetPart>(&p)) {
          for (const Item& i : set->items) REQUIRE(sent[from].insert(i).second);
        }
      }
      msg = nodes[1 - from]->handle_message(*msg);
      from = 1 - from;
    }
    CHECK(s0->contents() == s1->contents());
  }
}

TEST_CASE("monoid and treap backends reach the same sets") {
  std::mt19937_64 rng(40);
  const auto x0 = oracle::random_sorted(500, 16, rng);
  auto x1 = oracle::random_sorted(100, 16, rng);
  x1.insert(x1.end(), x0.begin(), x0.begin() + 300);
  std::sort(x1.begin(), x1.end());
  SessionConfig c;
  c.item_width = 16;
  const auto a = simulate(x0, x1, c);
  c.scheme_id = kSchemeMerkleTreap256;
  const auto b = simulate(x0, x1, c);
  CHECK(a.final0 == b.final0);
  CHECK(a.final1 == b.final1);
}
