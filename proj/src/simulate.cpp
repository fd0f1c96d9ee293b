#include "rbsr/simulate.hpp"

#include <chrono>
#include <memory>
#include <optional>

#include "rbsr/errors.hpp"
#include "rbsr/wire.hpp"

namespace rbsr {

namespace {

// Far beyond any round bound at 2^32 items; guards against a livelock bug.
constexpr std::uint64_t kMaxMessages = 1000;

}  // namespace

SimulationResult simulate(std::span<const Item> x0, std::span<const Item> x1,
                          const SimulationConfig& config) {
  if (config.initiator != 0 && config.initiator != 1) throw UsageError("initiator must be 0 or 1");
  const auto start = std::chrono::steady_clock::now();

  std::array<std::unique_ptr<RangeStore>, 2> stores;
  const std::array<std::span<const Item>, 2> inputs{x0, x1};
  for (int i = 0; i < 2; ++i) {
    stores[i] = make_store(config.node[i].scheme_id, config.node[i].item_width, inputs[i],
                           config.batch);
  }
  const int init = config.initiator;
  std::array<std::optional<Session>, 2> sessions;
  for (int i = 0; i < 2; ++i) {
    sessions[i].emplace(*stores[i], config.node[i], i == init ? Role::initiator : Role::responder);
  }
  const Handshake hs0 = handshake_for(*sessions[0]);
  if (hs0 != handshake_for(*sessions[1])) throw HandshakeError("node parameters do not match");
  const CodecConfig codec{hs0.item_width, hs0.digest_len};

  auto direction = [init](int from) { return from == init ? kToResponder : kToInitiator; };

  TranscriptRecorder recorder;
  recorder.record_handshake(kToResponder, kHandshakeSize);
  recorder.record_handshake(kToInitiator, kHandshakeSize);

  int sender = init;
  Message msg = sessions[init]->initiate();
  for (std::uint64_t sent = 1;; ++sent) {
    if (sent > kMaxMessages) throw ProtocolError("session did not terminate");
    const Bytes frame = encode_message(msg, codec);
    const std::optional<Message> decoded = decode_message(frame, codec);
    recorder.record_frame(direction(sender), frame, &*decoded);

    const int receiver = 1 - sender;
    std::optional<Message> response = sessions[receiver]->handle_message(*decoded);
    if (!response) {
      const Bytes done = encode_done();
      recorder.record_frame(direction(receiver), done, nullptr);
      sessions[sender]->mark_complete();
      recorder.record_frame(direction(sender), done, nullptr);
      break;
    }
    msg = std::move(*response);
    sender = receiver;
  }

  SimulationResult result;
  result.stats = recorder.finish();
  result.stats.edges_traversed = stores[0]->edges_traversed() + stores[1]->edges_traversed();
  result.final0 = stores[0]->contents();
  result.final1 = stores[1]->contents();
  result.stats.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SimulationResult simulate(std::span<const Item> x0, std::span<const Item> x1,
                          const SessionConfig& config) {
  SimulationConfig sim;
  sim.node = {config, config};
  return simulate(x0, x1, sim);
}

}  // namespace rbsr
