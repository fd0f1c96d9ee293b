#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbsr {

// Caller violated a documented precondition.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Unknown hash name, bad scheme id, inconsistent session parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Peer sent something the protocol does not allow. The session is aborted.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public ProtocolError {
 public:
  DecodeError(const std::string& what, std::size_t offset)
      : ProtocolError(what + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class HandshakeError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rbsr
