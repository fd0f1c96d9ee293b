#pragma once

#include <array>
#include <span>
#include <vector>

#include "rbsr/item.hpp"
#include "rbsr/protocol.hpp"
#include "rbsr/range_store.hpp"
#include "rbsr/transcript.hpp"

namespace rbsr {

struct SimulationConfig {
  // Configuration of the node holding x0 and of the node holding x1.
  std::array<SessionConfig, 2> node{};
  int initiator = 0;
  BatchMode batch = BatchMode::ascending_sweep;
};

struct SimulationResult {
  std::vector<Item> final0;
  std::vector<Item> final1;
  TranscriptStats stats;
};

// Runs a full session between two in-memory nodes. Every frame goes
// through the wire codec, and the byte accounting matches run_session.
SimulationResult simulate(std::span<const Item> x0, std::span<const Item> x1,
                          const SimulationConfig& config);

// Both nodes share `config`; the x0 node initiates.
SimulationResult simulate(std::span<const Item> x0, std::span<const Item> x1,
                          const SessionConfig& config);

}  // namespace rbsr
