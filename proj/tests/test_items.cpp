#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "rbsr/errors.hpp"
#include "rbsr/item.hpp"

using namespace rbsr;
using oracle::w1;

TEST_CASE("items order lexicographically and encode big-endian") {
  CHECK(Item::from_uint(0x0102, 2).hex() == "0102");
  CHECK(Item::from_uint(5, 4) < Item::from_uint(6, 4));
  CHECK(Item::from_uint(0x0100, 2) > Item::from_uint(0x00ff, 2));
  CHECK(Item::zero(3).hex() == "000000");
  CHECK(Item::from_hex("0aff") == Item(Bytes{0x0a, 0xff}));
  CHECK_THROWS_AS(Item::from_uint(256, 1), UsageError);
  CHECK_THROWS_AS(item_compare(Item::zero(1), Item::zero(2)), UsageError);
  CHECK(to_hex(from_hex("deadbeef")) == "deadbeef");
}

TEST_CASE("range shapes") {
  CHECK(range_is_full({w1(7), w1(7)}));
  CHECK(range_wraps({w1(9), w1(3)}));
  CHECK_FALSE(range_wraps({w1(3), w1(9)}));
  CHECK_FALSE(range_wraps({w1(3), w1(3)}));
}

TEST_CASE("range_contains matches a walk over the whole width-1 universe") {
  std::set<int> all;
  for (int v = 0; v < 256; ++v) all.insert(v);
  for (int x = 0; x < 256; x += 3) {
    for (int y = 0; y < 256; y += 5) {
      const auto walked = oracle::walk_range_w1(all, x, y);
      std::set<int> inside;
      for (const Item& i : walked) inside.insert(i.bytes()[0]);
      for (int s = 0; s < 256; ++s) {
        REQUIRE(range_contains({w1(x), w1(y)}, w1(s)) == (inside.count(s) == 1));
      }
    }
  }
}

TEST_CASE("cyclic_less walks upward from the origin and wraps once") {
  for (int origin = 0; origin < 256; origin += 17) {
    for (int a = 0; a < 256; a += 7) {
      for (int b = 0; b < 256; b += 11) {
        const int da = (a - origin + 256) % 256;
        const int db = (b - origin + 256) % 256;
        REQUIRE(cyclic_less(w1(a), w1(b), w1(origin)) == (da < db));
      }
    }
  }
}
