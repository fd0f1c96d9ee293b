#include "rbsr/transcript.hpp"

#include <algorithm>
#include <variant>

#include "rbsr/errors.hpp"

namespace rbsr {

namespace {

void check_direction(int direction) {
  if (direction != kToResponder && direction != kToInitiator) {
    throw UsageError("direction must be 0 or 1");
  }
}

}  // namespace

TranscriptRecorder::TranscriptRecorder() : hash_(HashFunction::sha256()) {}

void TranscriptRecorder::record_handshake(int direction, std::size_t bytes) {
  check_direction(direction);
  stats_.bytes_per_direction[direction] += bytes;
}

void TranscriptRecorder::record_frame(int direction, ByteView frame, const Message* msg) {
  check_direction(direction);
  stats_.bytes_per_direction[direction] += frame.size();
  log_.push_back(static_cast<std::uint8_t>(direction));
  log_.insert(log_.end(), frame.begin(), frame.end());

  if (!msg) {
    if (done_frames_++ == 0) {
      ++stats_.messages_total;
      ++stats_.messages_per_direction[direction];
    }
    return;
  }
  ++stats_.messages_total;
  ++stats_.messages_per_direction[direction];
  stats_.max_parts_in_message =
      std::max<std::uint64_t>(stats_.max_parts_in_message, msg->parts.size());
  for (const MessagePart& part : msg->parts) {
    if (const auto* set = std::get_if<RangeItemSetPart>(&part)) {
      ++stats_.parts_itemset;
      stats_.items_transmitted += set->items.size();
    } else {
      ++stats_.parts_fingerprint;
    }
  }
}

TranscriptStats TranscriptRecorder::finish() {
  stats_.transcript_digest = to_hex(hash_(ByteView(log_)));
  Bytes().swap(log_);
  return stats_;
}

}  // namespace rbsr
