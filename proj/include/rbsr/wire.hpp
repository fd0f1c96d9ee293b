#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "rbsr/item.hpp"
#include "rbsr/protocol.hpp"
#include "rbsr/stream.hpp"
#include "rbsr/transcript.hpp"

namespace rbsr {

inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kHandshakeSize = 9;
inline constexpr std::size_t kMaxFrameSize = std::size_t{16} << 20;
inline constexpr std::uint8_t kTagFingerprint = 0x00;
inline constexpr std::uint8_t kTagItemSet = 0x01;

struct Handshake {
  std::uint8_t version = kWireVersion;
  std::uint8_t item_width = 0;
  std::uint8_t scheme_id = 0;
  std::uint16_t digest_len = 0;

  friend bool operator==(const Handshake&, const Handshake&) = default;
};

Handshake handshake_for(const Session& session);
Bytes encode_handshake(const Handshake& hs);
// Throws HandshakeError on a bad magic or version, DecodeError on length.
Handshake decode_handshake(ByteView bytes);

struct CodecConfig {
  std::size_t item_width = kDefaultItemWidth;
  std::size_t digest_len = 32;
};

void encode_part(const MessagePart& part, const CodecConfig& config, Bytes& out);
// A complete frame: 4-byte big-endian part count, then the parts.
Bytes encode_message(const Message& msg, const CodecConfig& config);
Bytes encode_done();

// Pull-based input for the frame decoder.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual void read(std::uint8_t* out, std::size_t n) = 0;
};

// Reads one frame. Returns nothing for DONE. The raw frame bytes are
// appended to `raw` when given. Throws DecodeError with the offset within
// the frame.
std::optional<Message> read_frame(ByteSource& source, const CodecConfig& config,
                                  Bytes* raw = nullptr);

// Decodes exactly one frame occupying all of `bytes`.
std::optional<Message> decode_message(ByteView bytes, const CodecConfig& config);

// Drives `session` over `stream` until both peers have exchanged DONE.
// Items received before a failure stay in the store.
TranscriptStats run_session(ByteStream& stream, Session& session);

}  // namespace rbsr
