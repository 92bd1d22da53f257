/*
 * Copyright 2026 The PPDT Level-Site Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <list>
#include <mutex>
#include <set>
#include <thread>

#include "ppdt/wire/transport.hpp"

namespace ppdt::wire {
namespace {

[[noreturn]] void NetFail(const std::string& what) {
  throw Error(ErrorCode::kNetwork, what);
}

std::pair<std::string, std::string> SplitEndpoint(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size()) {
    NetFail("endpoint '" + endpoint + "' is not host:port");
  }
  return {endpoint.substr(0, colon), endpoint.substr(colon + 1)};
}

struct AddrList {
  addrinfo* head = nullptr;
  ~AddrList() {
    if (head) freeaddrinfo(head);
  }
};

void Resolve(const std::string& endpoint, bool passive, AddrList& out) {
  auto [host, port] = SplitEndpoint(endpoint);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  int rc = getaddrinfo(host.c_str(), port.c_str(), &hints, &out.head);
  if (rc != 0) NetFail("cannot resolve '" + endpoint + "': " + gai_strerror(rc));
}

void Tune(int fd, std::chrono::milliseconds timeout) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>(timeout.count() % 1000 * 1000);
  setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

// Open accepted sockets, so Stop() can unblock their readers.
struct FdRegistry {
  std::mutex mu;
  std::set<int> fds;
  bool stopped = false;
};

class TcpConnection final : public Connection {
 public:
  TcpConnection(int fd, std::shared_ptr<FdRegistry> registry)
      : fd_(fd), registry_(std::move(registry)) {}
  ~TcpConnection() override { Close(); }

  void SendFrame(const Bytes& frame) override {
    std::size_t off = 0;
    while (off < frame.size()) {
      ssize_t n = ::send(Fd(), frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) NetFail(std::string("send failed: ") + std::strerror(errno));
      off += static_cast<std::size_t>(n);
    }
  }

  Bytes ReceiveFrame() override {
    Bytes frame(kHeaderSize);
    ReadExact(frame.data(), kHeaderSize);
    const FrameHeader h = DecodeHeader(frame);
    frame.resize(kHeaderSize + h.length);
    ReadExact(frame.data() + kHeaderSize, h.length);
    return frame;
  }

  void Close() override {
    std::lock_guard lock(mu_);
    if (fd_ < 0) return;
    if (registry_) {
      std::lock_guard reg(registry_->mu);
      registry_->fds.erase(fd_);
    }
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }

 private:
  int Fd() {
    std::lock_guard lock(mu_);
    if (fd_ < 0) NetFail("connection is closed");
    return fd_;
  }

  void ReadExact(std::uint8_t* dst, std::size_t len) {
    const int fd = Fd();
    std::size_t off = 0;
    while (off < len) {
      ssize_t n = ::recv(fd, dst + off, len - off, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) NetFail("receive timed out");
      if (n < 0) NetFail(std::string("receive failed: ") + std::strerror(errno));
      if (n == 0) NetFail("connection closed by peer");
      off += static_cast<std::size_t>(n);
    }
  }

  std::mutex mu_;
  int fd_;
  std::shared_ptr<FdRegistry> registry_;
};

class TcpListener final : public Listener {
 public:
  TcpListener(int fd, std::string endpoint, Handler handler, std::chrono::milliseconds timeout)
      : fd_(fd), endpoint_(std::move(endpoint)), handler_(std::move(handler)),
        timeout_(timeout), registry_(std::make_shared<FdRegistry>()) {
    accept_thread_ = std::thread([this] { AcceptLoop(); });
  }
  ~TcpListener() override { Stop(); }

  std::string endpoint() const override { return endpoint_; }

  void Stop() override {
    {
      std::lock_guard lock(registry_->mu);
      if (registry_->stopped) return;
      registry_->stopped = true;
      for (int fd : registry_->fds) ::shutdown(fd, SHUT_RDWR);
    }
    ::shutdown(fd_, SHUT_RDWR);
    if (accept_thread_.joinable()) accept_thread_.join();
    ::close(fd_);
    std::lock_guard lock(workers_mu_);
    for (auto& w : workers_) w.thread.join();
    workers_.clear();
  }

 private:
  struct Worker {
    std::thread thread;
    std::shared_ptr<std::atomic<bool>> done;
  };

  void AcceptLoop() {
    for (;;) {
      int client = ::accept(fd_, nullptr, nullptr);
      if (client < 0) {
        if (errno == EINTR || errno == ECONNABORTED) continue;
        return;
      }
      {
        std::lock_guard lock(registry_->mu);
        if (registry_->stopped) {
          ::close(client);
          return;
        }
        registry_->fds.insert(client);
      }
      Tune(client, timeout_);
      auto done = std::make_shared<std::atomic<bool>>(false);
      auto conn = std::make_unique<TcpConnection>(client, registry_);
      std::lock_guard lock(workers_mu_);
      Reap();
      workers_.push_back(
          {std::thread([this, done, c = std::move(conn)]() mutable {
             try {
               handler_(std::move(c));
             } catch (...) {
               // Handlers report their own failures; nothing to do here.
             }
             done->store(true);
           }),
           done});
    }
  }

  void Reap() {
    for (auto it = workers_.begin(); it != workers_.end();) {
      if (it->done->load()) {
        it->thread.join();
        it = workers_.erase(it);
      } else {
        ++it;
      }
    }
  }

  int fd_;
  std::string endpoint_;
  Handler handler_;
  std::chrono::milliseconds timeout_;
  std::shared_ptr<FdRegistry> registry_;
  std::thread accept_thread_;
  std::mutex workers_mu_;
  std::list<Worker> workers_;
};

std::string LocalEndpoint(int fd, const std::string& host) {
  sockaddr_storage ss{};
  socklen_t len = sizeof ss;
  if (getsockname(fd, reinterpret_cast<sockaddr*>(&ss), &len) != 0) {
    NetFail(std::string("getsockname: ") + std::strerror(errno));
  }
  int port = ss.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port)
                                      : ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
  return host + ":" + std::to_string(port);
}

class TcpNetwork final : public Network {
 public:
  explicit TcpNetwork(std::chrono::milliseconds timeout) : timeout_(timeout) {}

  std::unique_ptr<Connection> Connect(const std::string& endpoint) override {
    AddrList addrs;
    Resolve(endpoint, false, addrs);
    int last_errno = 0;
    for (addrinfo* a = addrs.head; a; a = a->ai_next) {
      int fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
      if (fd < 0) {
        last_errno = errno;
        continue;
      }
      if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) {
        Tune(fd, timeout_);
        return std::make_unique<TcpConnection>(fd, nullptr);
      }
      last_errno = errno;
      ::close(fd);
    }
    NetFail("cannot connect to " + endpoint + ": " + std::strerror(last_errno));
  }

  std::unique_ptr<Listener> Listen(const std::string& endpoint, Handler handler) override {
    AddrList addrs;
    Resolve(endpoint, true, addrs);
    const std::string host = SplitEndpoint(endpoint).first;
    int last_errno = 0;
    for (addrinfo* a = addrs.head; a; a = a->ai_next) {
      int fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
      if (fd < 0) {
        last_errno = errno;
        continue;
      }
      int one = 1;
      setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 128) == 0) {
        return std::make_unique<TcpListener>(fd, LocalEndpoint(fd, host), std::move(handler),
                                             timeout_);
      }
      last_errno = errno;
      ::close(fd);
    }
    NetFail("cannot listen on " + endpoint + ": " + std::strerror(last_errno));
  }

 private:
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<Network> MakeTcpNetwork(std::chrono::milliseconds receive_timeout) {
  return std::make_unique<TcpNetwork>(receive_timeout);
}

}  // namespace ppdt::wire
