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

#include "corebench/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace corebench {

namespace {

std::string errno_str(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

void set_nonblocking(int fd, bool on) {
  int flags = fcntl(fd, F_GETFL, 0);
  if (on) {
    fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  } else {
    fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
  }
}

sockaddr_in loopback_addr(std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

/// Waits for readiness; returns false on timeout.
bool wait_fd(int fd, short events, int timeout_ms) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int rc = poll(&p, 1, timeout_ms);
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw NetError(errno_str("poll"));
  }
}

}  // namespace

void Socket::close_fd() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::write_all(std::span<const std::uint8_t> data, int timeout_ms) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + off, data.size() - off,
                             MSG_NOSIGNAL | MSG_DONTWAIT);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) {
      if (!wait_fd(fd_, POLLOUT, timeout_ms)) {
        throw NetError("write: timeout");
      }
      continue;
    }
    if (n < 0 && errno == EINTR) continue;
    throw NetError(errno_str("write"));
  }
}

bool Socket::read_exact(std::span<std::uint8_t> data, int timeout_ms) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n =
        ::recv(fd_, data.data() + off, data.size() - off, MSG_DONTWAIT);
    if (n > 0) {
      off += static_cast<std::size_t>(n);
      continue;
    }
    if (n == 0) {
      if (off == 0) return false;
      throw NetError("read: truncated stream");
    }
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (!wait_fd(fd_, POLLIN, timeout_ms)) throw NetError("read: timeout");
      continue;
    }
    if (errno == EINTR) continue;
    throw NetError(errno_str("read"));
  }
  return true;
}

long Socket::write_nonblocking(std::span<const std::uint8_t> data) {
  const ssize_t n =
      ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
  if (n >= 0) return n;
  if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) return 0;
  return -1;
}

Socket tcp_connect(std::uint16_t port, int timeout_ms) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw NetError(errno_str("socket"));
  Socket sock(fd);
  set_nonblocking(fd, true);
  const sockaddr_in addr = loopback_addr(port);
  int rc = ::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr));
  if (rc < 0 && errno != EINPROGRESS) {
    throw NetError(errno_str("connect"));
  }
  if (rc < 0) {
    if (!wait_fd(fd, POLLOUT, timeout_ms)) throw NetError("connect: timeout");
    int err = 0;
    socklen_t len = sizeof(err);
    getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      throw NetError(std::string("connect: ") + std::strerror(err));
    }
  }
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return sock;
}

TcpListener::TcpListener(std::uint16_t port) : port_(port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw NetError(errno_str("socket"));
  sock_ = Socket(fd);
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  const sockaddr_in addr = loopback_addr(port);
  if (::bind(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) < 0) {
    if (errno == EADDRINUSE) {
      throw NetError("port in use: " + std::to_string(port));
    }
    throw NetError(errno_str("bind"));
  }
  if (::listen(fd, 256) < 0) throw NetError(errno_str("listen"));
}

Socket TcpListener::accept_conn(int timeout_ms) {
  if (!wait_fd(sock_.fd(), POLLIN, timeout_ms)) return Socket();
  const int fd = ::accept(sock_.fd(), nullptr, nullptr);
  if (fd < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR ||
        errno == ECONNABORTED) {
      return Socket();
    }
    throw NetError(errno_str("accept"));
  }
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return Socket(fd);
}

}  // namespace corebench
