#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "rbsr/item.hpp"

namespace rbsr {

// A reliable, ordered, blocking byte stream. Failures throw TransportError.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  virtual void write_all(ByteView data) = 0;
  // Fills `out` completely or throws TransportError on end of stream.
  virtual void read_exact(std::uint8_t* out, std::size_t n) = 0;
  virtual void close() = 0;
};

class TcpStream : public ByteStream {
 public:
  explicit TcpStream(int fd) noexcept : fd_(fd) {}
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  void write_all(ByteView data) override;
  void read_exact(std::uint8_t* out, std::size_t n) override;
  void close() override;

 private:
  int fd_;
};

// "host:port" with a numeric or resolvable host. Port 0 asks the kernel
// for a free port.
std::pair<std::string, std::uint16_t> parse_address(std::string_view addr);

class TcpListener {
 public:
  explicit TcpListener(std::string_view addr);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<TcpStream> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<TcpStream> tcp_connect(std::string_view addr);

// Two connected in-memory endpoints, usable from different threads.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_memory_pipe();

}  // namespace rbsr
