#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "rbsr/hash.hpp"
#include "rbsr/item.hpp"
#include "rbsr/protocol.hpp"

namespace rbsr {

// Direction 0 carries frames from the initiator to the responder,
// direction 1 the reverse.
inline constexpr int kToResponder = 0;
inline constexpr int kToInitiator = 1;

struct TranscriptStats {
  // Data frames plus the first DONE frame. A trailing DONE reply is
  // counted in bytes only.
  std::uint64_t messages_total = 0;
  std::array<std::uint64_t, 2> messages_per_direction{};
  std::uint64_t parts_fingerprint = 0;
  std::uint64_t parts_itemset = 0;
  std::uint64_t items_transmitted = 0;
  // Everything written to the stream: handshakes, data frames, DONE frames.
  std::array<std::uint64_t, 2> bytes_per_direction{};
  std::uint64_t max_parts_in_message = 0;
  std::uint64_t edges_traversed = 0;
  double duration_seconds = 0.0;
  // sha256 over (direction byte || frame bytes) of every frame in order.
  std::string transcript_digest;

  std::uint64_t bytes_total() const noexcept {
    return bytes_per_direction[0] + bytes_per_direction[1];
  }
  std::uint64_t parts_total() const noexcept { return parts_fingerprint + parts_itemset; }
};

// Accumulates TranscriptStats as frames go by. Both peers of a session
// record the same frames in the same order, so their digests agree.
class TranscriptRecorder {
 public:
  TranscriptRecorder();

  void record_handshake(int direction, std::size_t bytes);
  // `msg` is null for a DONE frame.
  void record_frame(int direction, ByteView frame, const Message* msg);

  bool done_seen() const noexcept { return done_frames_ > 0; }
  // Closes the digest; the recorder must not be used afterwards.
  TranscriptStats finish();

 private:
  TranscriptStats stats_;
  HashFunction hash_;
  Bytes log_;
  int done_frames_ = 0;
};

}  // namespace rbsr
