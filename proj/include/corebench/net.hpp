// Copyright 2026 The corebench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COREBENCH_NET_HPP_
#define COREBENCH_NET_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace corebench {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// RAII wrapper around a socket fd. Move-only.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close_fd(); }
  Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      close_fd();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close_fd();

  /// Writes the whole buffer or throws NetError (timeout counts as failure).
  void write_all(std::span<const std::uint8_t> data, int timeout_ms);

  /// Reads exactly data.size() bytes. Returns false on clean EOF before the
  /// first byte; throws NetError on timeout, reset, or truncated stream.
  bool read_exact(std::span<std::uint8_t> data, int timeout_ms);

  /// Best-effort non-blocking write; returns bytes written (may be short)
  /// or -1 on a fatal socket error. Never blocks.
  long write_nonblocking(std::span<const std::uint8_t> data);

 private:
  int fd_ = -1;
};

/// Connects to 127.0.0.1:port with a connect timeout. TCP_NODELAY is set:
/// the harness measures latency and must not absorb Nagle delays.
Socket tcp_connect(std::uint16_t port, int timeout_ms);

class TcpListener {
 public:
  TcpListener() = default;
  /// Binds and listens on 127.0.0.1:port. Throws NetError (EADDRINUSE gets
  /// a "port in use" message) on failure.
  explicit TcpListener(std::uint16_t port);

  /// Waits up to timeout_ms for a connection; invalid Socket on timeout.
  Socket accept_conn(int timeout_ms);

  std::uint16_t port() const { return port_; }
  bool valid() const { return sock_.valid(); }
  int fd() const { return sock_.fd(); }

 private:
  Socket sock_;
  std::uint16_t port_ = 0;
};

}  // namespace corebench

#endif  // COREBENCH_NET_HPP_
