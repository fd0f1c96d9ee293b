#include "rbsr/wire.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <string>
#include <variant>

#include "rbsr/errors.hpp"

namespace rbsr {

namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'B', 'S', 'R'};

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void put_item(Bytes& out, const Item& item, const CodecConfig& config) {
  if (item.width() != config.item_width) throw UsageError("item width does not match codec");
  out.insert(out.end(), item.bytes().begin(), item.bytes().end());
}

// Tracks the offset within the frame and enforces the frame size limit.
class FrameReader {
 public:
  FrameReader(ByteSource& source, Bytes* raw) : source_(source), raw_(raw) {}

  std::size_t offset() const noexcept { return offset_; }

  void need(std::size_t n) const {
    if (n > kMaxFrameSize || offset_ + n > kMaxFrameSize) {
      throw DecodeError("frame exceeds 16 MiB limit", offset_);
    }
  }

  void read(std::uint8_t* out, std::size_t n) {
    need(n);
    source_.read(out, n);
    if (raw_) raw_->insert(raw_->end(), out, out + n);
    offset_ += n;
  }

  std::uint8_t byte() {
    std::uint8_t b = 0;
    read(&b, 1);
    return b;
  }

  std::uint32_t u32() {
    std::uint8_t buf[4];
    read(buf, 4);
    return get_u32(buf);
  }

  Item item(std::size_t width) {
    Bytes bytes(width);
    read(bytes.data(), width);
    return Item(std::move(bytes));
  }

 private:
  ByteSource& source_;
  Bytes* raw_;
  std::size_t offset_ = 0;
};

class SpanSource : public ByteSource {
 public:
  explicit SpanSource(ByteView bytes) : bytes_(bytes) {}

  void read(std::uint8_t* out, std::size_t n) override {
    if (n > bytes_.size() - pos_) throw DecodeError("unexpected end of input", bytes_.size());
    std::memcpy(out, bytes_.data() + pos_, n);
    pos_ += n;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::size_t position() const noexcept { return pos_; }

 private:
  ByteView bytes_;
  std::size_t pos_ = 0;
};

class StreamSource : public ByteSource {
 public:
  explicit StreamSource(ByteStream& stream) : stream_(stream) {}
  void read(std::uint8_t* out, std::size_t n) override { stream_.read_exact(out, n); }

 private:
  ByteStream& stream_;
};

MessagePart read_part(FrameReader& in, const CodecConfig& config) {
  const std::size_t tag_offset = in.offset();
  const std::uint8_t tag = in.byte();
  if (tag != kTagFingerprint && tag != kTagItemSet) {
    throw DecodeError("unknown part tag " + std::to_string(tag), tag_offset);
  }
  Item lower = in.item(config.item_width);
  Item upper = in.item(config.item_width);
  if (tag == kTagFingerprint) {
    Bytes digest(config.digest_len);
    in.read(digest.data(), digest.size());
    return RangeFingerprintPart{std::move(lower), std::move(upper), Fingerprint(std::move(digest))};
  }
  const std::uint32_t count = in.u32();
  in.need(std::size_t{count} * config.item_width + 1);
  std::vector<Item> items;
  items.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t item_offset = in.offset();
    Item item = in.item(config.item_width);
    if (!items.empty() && !cyclic_less(items.back(), item, lower)) {
      throw DecodeError("item set not strictly ascending", item_offset);
    }
    items.push_back(std::move(item));
  }
  const std::size_t flag_offset = in.offset();
  const std::uint8_t flag = in.byte();
  if (flag > 1) throw DecodeError("flag byte must be 0 or 1", flag_offset);
  return RangeItemSetPart{std::move(lower), std::move(upper), std::move(items), flag == 1};
}

}  // namespace

Handshake handshake_for(const Session& session) {
  const RangeStore& store = session.store();
  Handshake hs;
  hs.item_width = static_cast<std::uint8_t>(store.item_width());
  hs.scheme_id = store.scheme_id();
  hs.digest_len = static_cast<std::uint16_t>(store.digest_len());
  return hs;
}

Bytes encode_handshake(const Handshake& hs) {
  Bytes out(std::begin(kMagic), std::end(kMagic));
  out.push_back(hs.version);
  out.push_back(hs.item_width);
  out.push_back(hs.scheme_id);
  out.push_back(static_cast<std::uint8_t>(hs.digest_len >> 8));
  out.push_back(static_cast<std::uint8_t>(hs.digest_len));
  return out;
}

Handshake decode_handshake(ByteView bytes) {
  if (bytes.size() != kHandshakeSize) {
    throw DecodeError("handshake must be 9 bytes", std::min(bytes.size(), kHandshakeSize));
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw HandshakeError("bad handshake magic");
  }
  Handshake hs;
  hs.version = bytes[4];
  if (hs.version != kWireVersion) {
    throw HandshakeError("unsupported wire version " + std::to_string(hs.version));
  }
  hs.item_width = bytes[5];
  hs.scheme_id = bytes[6];
  hs.digest_len = static_cast<std::uint16_t>((bytes[7] << 8) | bytes[8]);
  return hs;
}

void encode_part(const MessagePart& part, const CodecConfig& config, Bytes& out) {
  if (const auto* fp = std::get_if<RangeFingerprintPart>(&part)) {
    if (fp->fingerprint.size() != config.digest_len) {
      throw UsageError("fingerprint length does not match codec");
    }
    out.push_back(kTagFingerprint);
    put_item(out, fp->lower, config);
    put_item(out, fp->upper, config);
    out.insert(out.end(), fp->fingerprint.bytes().begin(), fp->fingerprint.bytes().end());
    return;
  }
  const auto& set = std::get<RangeItemSetPart>(part);
  out.push_back(kTagItemSet);
  put_item(out, set.lower, config);
  put_item(out, set.upper, config);
  put_u32(out, static_cast<std::uint32_t>(set.items.size()));
  for (const Item& item : set.items) put_item(out, item, config);
  out.push_back(set.is_response ? 1 : 0);
}

Bytes encode_message(const Message& msg, const CodecConfig& config) {
  if (msg.parts.empty()) throw UsageError("cannot encode an empty message");
  Bytes out;
  put_u32(out, static_cast<std::uint32_t>(msg.parts.size()));
  for (const MessagePart& part : msg.parts) encode_part(part, config, out);
  if (out.size() > kMaxFrameSize) throw UsageError("message exceeds 16 MiB frame limit");
  return out;
}

Bytes encode_done() { return Bytes(4, 0); }

std::optional<Message> read_frame(ByteSource& source, const CodecConfig& config, Bytes* raw) {
  FrameReader in(source, raw);
  const std::uint32_t count = in.u32();
  if (count == 0) return std::nullopt;
  // Every part occupies at least a tag and two boundaries.
  const std::size_t min_part = 1 + 2 * config.item_width;
  in.need(std::size_t{count} * min_part);
  Message msg;
  msg.parts.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) msg.parts.push_back(read_part(in, config));
  return msg;
}

std::optional<Message> decode_message(ByteView bytes, const CodecConfig& config) {
  SpanSource source(bytes);
  auto msg = read_frame(source, config);
  if (source.remaining() != 0) throw DecodeError("trailing bytes after frame", source.position());
  return msg;
}

TranscriptStats run_session(ByteStream& stream, Session& session) {
  const auto start = std::chrono::steady_clock::now();
  const bool initiator = session.role() == Role::initiator;
  const int out_dir = initiator ? kToResponder : kToInitiator;
  const int in_dir = 1 - out_dir;
  TranscriptRecorder recorder;

  const Handshake mine = handshake_for(session);
  stream.write_all(encode_handshake(mine));
  recorder.record_handshake(out_dir, kHandshakeSize);
  std::uint8_t peer[kHandshakeSize];
  stream.read_exact(peer, kHandshakeSize);
  recorder.record_handshake(in_dir, kHandshakeSize);
  if (decode_handshake(ByteView(peer, kHandshakeSize)) != mine) {
    throw HandshakeError("peer handshake does not match local parameters");
  }

  const CodecConfig codec{session.store().item_width(), session.store().digest_len()};
  const std::uint64_t edges_before = session.store().edges_traversed();

  auto send = [&](const Message* msg) {
    const Bytes frame = msg ? encode_message(*msg, codec) : encode_done();
    stream.write_all(frame);
    recorder.record_frame(out_dir, frame, msg);
  };

  bool sent_done = false;
  if (initiator) {
    const Message first = session.initiate();
    send(&first);
  }
  StreamSource source(stream);
  for (;;) {
    Bytes raw;
    const std::optional<Message> incoming = read_frame(source, codec, &raw);
    recorder.record_frame(in_dir, raw, incoming ? &*incoming : nullptr);
    if (!incoming) {
      session.mark_complete();
      if (!sent_done) send(nullptr);
      break;
    }
    if (sent_done) throw ProtocolError("peer sent data after DONE");
    const std::optional<Message> response = session.handle_message(*incoming);
    if (response) {
      send(&*response);
    } else {
      send(nullptr);
      sent_done = true;
    }
  }
  stream.close();

  TranscriptStats stats = recorder.finish();
  stats.edges_traversed = session.store().edges_traversed() - edges_before;
  stats.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace rbsr
