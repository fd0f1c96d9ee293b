#include <doctest.h>

#include <future>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "rbsr/errors.hpp"
#include "rbsr/simulate.hpp"
#include "rbsr/wire.hpp"

using namespace rbsr;
using oracle::w1;

namespace {

Message random_message(std::mt19937_64& rng, const CodecConfig& cfg) {
  Message m;
  const std::size_t parts = 1 + rng() % 6;
  for (std::size_t i = 0; i < parts; ++i) {
    const Item lo = oracle::random_item(cfg.item_width, rng);
    const Item hi = oracle::random_item(cfg.item_width, rng);
    if (rng() % 2) {
      Bytes d(cfg.digest_len);
      for (auto& c : d) c = static_cast<std::uint8_t>(rng());
      m.parts.emplace_back(RangeFingerprintPart{lo, hi, Fingerprint(std::move(d))});
    } else {
      auto items = oracle::random_sorted(rng() % 5, cfg.item_width, rng);
      std::sort(items.begin(), items.end(),
                [&lo](const Item& a, const Item& b) { return cyclic_less(a, b, lo); });
      m.parts.emplace_back(RangeItemSetPart{lo, hi, std::move(items), rng() % 2 == 1});
    }
  }
  return m;
}

std::size_t decode_error_offset(ByteView bytes, const CodecConfig& cfg) {
  try {
    (void)decode_message(bytes, cfg);
  } catch (const DecodeError& e) {
    return e.offset();
  }
  FAIL("expected a decode error");
  return 0;
}

}  // namespace

TEST_CASE("fingerprint part layout") {
  const CodecConfig cfg{1, 1};
  Bytes out;
  encode_part(RangeFingerprintPart{w1(0x02), w1(0x0d), Fingerprint(Bytes{0xab})}, cfg, out);
  CHECK(out == Bytes{0x00, 0x02, 0x0d, 0xab});
}

TEST_CASE("empty item set layout") {
  const CodecConfig cfg{1, 1};
  Bytes out;
  encode_part(RangeItemSetPart{w1(0x05), w1(0x09), {}, false}, cfg, out);
  CHECK(out == Bytes{0x01, 0x05, 0x09, 0, 0, 0, 0, 0x00});
  out.clear();
  encode_part(RangeItemSetPart{w1(0x05), w1(0x09), {w1(7)}, true}, cfg, out);
  CHECK(out == Bytes{0x01, 0x05, 0x09, 0, 0, 0, 1, 0x07, 0x01});
}

TEST_CASE("frames and DONE") {
  const CodecConfig cfg{1, 1};
  const Message m{{RangeFingerprintPart{w1(2), w1(13), Fingerprint(Bytes{0xab})}}};
  const Bytes frame = encode_message(m, cfg);
  CHECK(frame == Bytes{0, 0, 0, 1, 0x00, 0x02, 0x0d, 0xab});
  CHECK(decode_message(frame, cfg) == m);
  CHECK(encode_done() == Bytes{0, 0, 0, 0});
  CHECK_FALSE(decode_message(encode_done(), cfg));
  CHECK_THROWS_AS(encode_message(Message{}, cfg), UsageError);
}

TEST_CASE("handshake layout") {
  Handshake hs;
  hs.item_width = 32;
  hs.scheme_id = kSchemeXor256;
  hs.digest_len = 32;
  const Bytes b = encode_handshake(hs);
  CHECK(b == Bytes{'R', 'B', 'S', 'R', 0x01, 0x20, 0x01, 0x00, 0x20});
  CHECK(decode_handshake(b) == hs);
  Bytes bad = b;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_handshake(bad), HandshakeError);
  bad = b;
  bad[4] = 2;
  CHECK_THROWS_AS(decode_handshake(bad), HandshakeError);
  CHECK_THROWS_AS(decode_handshake(ByteView(b).first(8)), DecodeError);
}

TEST_CASE("round trip over random messages") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 2000; ++i) {
    const CodecConfig cfg{1 + rng() % 40, 1 + rng() % 40};
    const Message m = random_message(rng, cfg);
    const Bytes frame = encode_message(m, cfg);
    const auto back = decode_message(frame, cfg);
    REQUIRE(back);
    REQUIRE(*back == m);
  }
}

TEST_CASE("decode errors carry the offset") {
  const CodecConfig cfg{1, 1};
  CHECK(decode_error_offset(Bytes{0, 0, 0, 1, 0x00, 0x02, 0x0d, 0xab, 0x00}, cfg) == 8);
  CHECK(decode_error_offset(Bytes{0, 0, 0, 1, 0x07, 0x02, 0x0d, 0xab}, cfg) == 4);
  CHECK(decode_error_offset(Bytes{0, 0, 0, 1, 0x01, 0x02, 0x0d, 0, 0, 0, 0, 0x02}, cfg) == 11);
  CHECK(decode_error_offset(Bytes{0, 0, 0, 1, 0x01, 0x02, 0x0d, 0, 0, 0, 2, 0x05, 0x04, 0x00},
                            cfg) == 12);
  CHECK(decode_error_offset(Bytes{0, 0, 0, 1, 0x00, 0x02, 0x0d}, cfg) == 7);
  CHECK(decode_error_offset(Bytes{0, 0}, cfg) == 2);
  CHECK_THROWS_AS(decode_message(Bytes{0xff, 0xff, 0xff, 0xff, 0x00}, cfg), DecodeError);
  CHECK_THROWS_AS(decode_message(Bytes{0, 0, 0, 1, 0x01, 0x02, 0x0d, 0xff, 0xff, 0xff, 0xff}, cfg),
                  DecodeError);
}

TEST_CASE("mutated frames either fail or re-encode to the same bytes") {
  std::mt19937_64 rng(2);
  const CodecConfig cfg{2, 3};
  for (int i = 0; i < 3000; ++i) {
    Bytes frame = encode_message(random_message(rng, cfg), cfg);
    const std::size_t flips = 1 + rng() % 3;
    for (std::size_t f = 0; f < flips; ++f) frame[rng() % frame.size()] ^= 1u << (rng() % 8);
    if (rng() % 4 == 0) frame.resize(rng() % frame.size());
    try {
      const auto m = decode_message(frame, cfg);
      REQUIRE((m ? encode_message(*m, cfg) : encode_done()) == frame);
    } catch (const DecodeError&) {
    }
  }
}

namespace {

struct PeerResult {
  TranscriptStats stats;
  std::vector<Item> contents;
};

PeerResult run_peer(ByteStream& stream, std::span<const Item> items, SessionConfig config,
                    Role role) {
  auto store = make_store(config.scheme_id, config.item_width, items);
  Session s(*store, config, role);
  PeerResult r;
  r.stats = run_session(stream, s);
  r.contents = store->contents();
  return r;
}

}  // namespace

TEST_CASE("in-memory streams reproduce the simulator") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 10; ++round) {
    const auto x0 = oracle::random_sorted(rng() % 400, 8, rng);
    auto x1 = oracle::random_sorted(rng() % 400, 8, rng);
    x1.insert(x1.end(), x0.begin(), x0.begin() + static_cast<std::ptrdiff_t>(x0.size() / 2));
    std::sort(x1.begin(), x1.end());
    x1.erase(std::unique(x1.begin(), x1.end()), x1.end());
    SessionConfig c;
    c.item_width = 8;
    c.scheme_id = round % 2 ? kSchemeMerkleTreap256 : kSchemeXor256;
    c.branching = 2 + round % 3;
    const auto sim = simulate(x0, x1, c);

    auto [ea, eb] = make_memory_pipe();
    auto responder = std::async(std::launch::async, [&, s = eb.get()] {
      return run_peer(*s, x1, c, Role::responder);
    });
    const PeerResult init = run_peer(*ea, x0, c, Role::initiator);
    const PeerResult resp = responder.get();
    CHECK(init.contents == sim.final0);
    CHECK(resp.contents == sim.final1);
    for (const auto* st : {&init.stats, &resp.stats}) {
      CHECK(st->bytes_per_direction == sim.stats.bytes_per_direction);
      CHECK(st->messages_total == sim.stats.messages_total);
      CHECK(st->transcript_digest == sim.stats.transcript_digest);
    }
  }
}

TEST_CASE("equal sets exchange one data frame and the DONE pair") {
  std::mt19937_64 rng(4);
  const auto x = oracle::random_sorted(100, 32, rng);
  SessionConfig c;
  auto [ea, eb] = make_memory_pipe();
  auto responder = std::async(std::launch::async,
                              [&, s = eb.get()] { return run_peer(*s, x, c, Role::responder); });
  const PeerResult init = run_peer(*ea, x, c, Role::initiator);
  responder.get();
  CHECK(init.stats.messages_total == 2);
  CHECK(init.stats.parts_fingerprint == 1);
  CHECK(init.stats.bytes_per_direction[0] == 9 + 4 + 1 + 64 + 32 + 4);
  CHECK(init.stats.bytes_per_direction[1] == 9 + 4);
}

TEST_CASE("mismatched handshakes abort before any frame") {
  std::mt19937_64 rng(5);
  const auto x0 = oracle::random_sorted(10, 32, rng);
  const auto x1 = oracle::random_sorted(10, 32, rng);
  SessionConfig a, b;
  b.scheme_id = kSchemeSum256;
  auto store0 = make_store(a.scheme_id, 32, x0);
  auto store1 = make_store(b.scheme_id, 32, x1);
  Session s0(*store0, a, Role::initiator), s1(*store1, b, Role::responder);
  auto [ea, eb] = make_memory_pipe();
  auto responder = std::async(std::launch::async, [&, s = eb.get()] { run_session(*s, s1); });
  CHECK_THROWS_AS(run_session(*ea, s0), HandshakeError);
  CHECK_THROWS_AS(responder.get(), HandshakeError);
  CHECK(store0->contents() == x0);
  CHECK(store1->contents() == x1);
}

TEST_CASE("loopback TCP session") {
  std::mt19937_64 rng(6);
  const auto x0 = oracle::random_sorted(300, 32, rng);
  const auto x1 = oracle::random_sorted(200, 32, rng);
  SessionConfig c;
  const auto sim = simulate(x0, x1, c);
  TcpListener listener("127.0.0.1:0");
  REQUIRE(listener.port() != 0);
  auto server = std::async(std::launch::async, [&] {
    auto conn = listener.accept();
    return run_peer(*conn, x1, c, Role::responder);
  });
  auto client = tcp_connect("127.0.0.1:" + std::to_string(listener.port()));
  const PeerResult init = run_peer(*client, x0, c, Role::initiator);
  const PeerResult resp = server.get();
  CHECK(init.contents == sim.final0);
  CHECK(resp.contents == sim.final1);
  CHECK(init.stats.bytes_per_direction == sim.stats.bytes_per_direction);
  CHECK(resp.stats.transcript_digest == sim.stats.transcript_digest);
}

TEST_CASE("addresses") {
  CHECK(parse_address("127.0.0.1:80") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 80});
  CHECK(parse_address("[::1]:9").first == "::1");
  CHECK_THROWS_AS(parse_address("localhost"), UsageError);
  CHECK_THROWS_AS(parse_address("h:99999"), UsageError);
  CHECK_THROWS_AS(tcp_connect("127.0.0.1:1"), TransportError);
}
