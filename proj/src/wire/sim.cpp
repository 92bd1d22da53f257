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

#include <atomic>
#include <condition_variable>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <thread>

#include "ppdt/wire/transport.hpp"

namespace ppdt::wire {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void NetFail(const std::string& what) {
  throw Error(ErrorCode::kNetwork, what);
}

// One direction of a simulated connection.
struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::pair<Clock::time_point, Bytes>> frames;
  Clock::time_point last_due{};
  bool closed = false;

  void Shut() {
    std::lock_guard lock(mu);
    closed = true;
    cv.notify_all();
  }
};

class SimConnection final : public Connection {
 public:
  SimConnection(std::shared_ptr<Pipe> in, std::shared_ptr<Pipe> out,
                std::chrono::milliseconds delay, std::chrono::milliseconds timeout)
      : in_(std::move(in)), out_(std::move(out)), delay_(delay), timeout_(timeout) {}
  ~SimConnection() override { Close(); }

  void SendFrame(const Bytes& frame) override {
    // Same framing checks a socket reader applies.
    DecodeHeader(frame);
    std::lock_guard lock(out_->mu);
    if (out_->closed) NetFail("connection closed by peer");
    auto due = std::max(Clock::now() + delay_, out_->last_due);
    out_->last_due = due;
    out_->frames.emplace_back(due, frame);
    out_->cv.notify_all();
  }

  Bytes ReceiveFrame() override {
    const auto deadline = Clock::now() + timeout_;
    std::unique_lock lock(in_->mu);
    for (;;) {
      if (!in_->frames.empty()) {
        auto due = in_->frames.front().first;
        if (Clock::now() >= due) {
          Bytes f = std::move(in_->frames.front().second);
          in_->frames.pop_front();
          return f;
        }
        if (due > deadline) {
          in_->cv.wait_until(lock, deadline);
          if (Clock::now() >= deadline) NetFail("receive timed out");
        } else {
          in_->cv.wait_until(lock, due);
        }
        continue;
      }
      if (in_->closed) NetFail("connection closed by peer");
      if (in_->cv.wait_until(lock, deadline) == std::cv_status::timeout &&
          in_->frames.empty() && !in_->closed) {
        NetFail("receive timed out");
      }
    }
  }

  void Close() override {
    out_->Shut();
    in_->Shut();
  }

 private:
  std::shared_ptr<Pipe> in_, out_;
  std::chrono::milliseconds delay_, timeout_;
};

struct SimEndpoint {
  Handler handler;
  std::mutex mu;
  bool stopped = false;
  std::list<std::weak_ptr<Pipe>> pipes;
  std::list<std::pair<std::thread, std::shared_ptr<std::atomic<bool>>>> threads;

  void Reap() {
    for (auto it = threads.begin(); it != threads.end();) {
      if (it->second->load()) {
        it->first.join();
        it = threads.erase(it);
      } else {
        ++it;
      }
    }
    pipes.remove_if([](const std::weak_ptr<Pipe>& p) { return p.expired(); });
  }
};

struct SimState {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<SimEndpoint>> endpoints;
};

class SimListener final : public Listener {
 public:
  SimListener(std::shared_ptr<SimState> state, std::string name,
              std::shared_ptr<SimEndpoint> ep)
      : state_(std::move(state)), name_(std::move(name)), ep_(std::move(ep)) {}
  ~SimListener() override { Stop(); }

  std::string endpoint() const override { return name_; }

  void Stop() override {
    {
      std::lock_guard lock(state_->mu);
      auto it = state_->endpoints.find(name_);
      if (it != state_->endpoints.end() && it->second == ep_) state_->endpoints.erase(it);
    }
    decltype(ep_->threads) threads;
    {
      std::lock_guard lock(ep_->mu);
      if (ep_->stopped) return;
      ep_->stopped = true;
      for (auto& w : ep_->pipes) {
        if (auto p = w.lock()) p->Shut();
      }
      threads.swap(ep_->threads);
    }
    for (auto& t : threads) t.first.join();
  }

 private:
  std::shared_ptr<SimState> state_;
  std::string name_;
  std::shared_ptr<SimEndpoint> ep_;
};

class SimNetwork final : public Network {
 public:
  SimNetwork(std::chrono::milliseconds delay, std::chrono::milliseconds timeout)
      : state_(std::make_shared<SimState>()), delay_(delay), timeout_(timeout) {}

  std::unique_ptr<Connection> Connect(const std::string& endpoint) override {
    std::shared_ptr<SimEndpoint> ep;
    {
      std::lock_guard lock(state_->mu);
      auto it = state_->endpoints.find(endpoint);
      if (it == state_->endpoints.end()) NetFail("cannot connect to " + endpoint);
      ep = it->second;
    }
    auto up = std::make_shared<Pipe>();
    auto down = std::make_shared<Pipe>();
    auto server = std::make_unique<SimConnection>(up, down, delay_, timeout_);
    std::lock_guard lock(ep->mu);
    if (ep->stopped) NetFail("cannot connect to " + endpoint);
    ep->Reap();
    ep->pipes.push_back(up);
    ep->pipes.push_back(down);
    auto done = std::make_shared<std::atomic<bool>>(false);
    ep->threads.emplace_back(std::thread([ep, done, c = std::move(server)]() mutable {
                               try {
                                 ep->handler(std::move(c));
                               } catch (...) {
                               }
                               done->store(true);
                             }),
                             done);
    return std::make_unique<SimConnection>(down, up, delay_, timeout_);
  }

  std::unique_ptr<Listener> Listen(const std::string& endpoint, Handler handler) override {
    auto ep = std::make_shared<SimEndpoint>();
    ep->handler = std::move(handler);
    std::lock_guard lock(state_->mu);
    if (!state_->endpoints.emplace(endpoint, ep).second) {
      NetFail("cannot listen on " + endpoint + ": address in use");
    }
    return std::make_unique<SimListener>(state_, endpoint, ep);
  }

 private:
  std::shared_ptr<SimState> state_;
  std::chrono::milliseconds delay_, timeout_;
};

}  // namespace

std::unique_ptr<Network> MakeSimNetwork(std::chrono::milliseconds per_frame_delay,
                                        std::chrono::milliseconds receive_timeout) {
  return std::make_unique<SimNetwork>(per_frame_delay, receive_timeout);
}

}  // namespace ppdt::wire
