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

#ifndef PPDT_WIRE_TRANSPORT_HPP_
#define PPDT_WIRE_TRANSPORT_HPP_

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "ppdt/he/bigint.hpp"
#include "ppdt/wire/message.hpp"

namespace ppdt::wire {

// A reliable ordered channel carrying whole frames. Errors are Error(kNetwork)
// for transport trouble and DecodeError for bad frames.
class Connection {
 public:
  virtual ~Connection() = default;
  virtual void SendFrame(const Bytes& frame) = 0;
  // Blocks until one complete frame arrives, the peer closes, or the receive
  // timeout expires.
  virtual Bytes ReceiveFrame() = 0;
  virtual void Close() = 0;
};

using Handler = std::function<void(std::unique_ptr<Connection>)>;

class Listener {
 public:
  virtual ~Listener() = default;
  // The address peers should connect to (the resolved port for ":0").
  virtual std::string endpoint() const = 0;
  // Stops accepting, unblocks open connections and joins handler threads.
  virtual void Stop() = 0;
};

class Network {
 public:
  virtual ~Network() = default;
  virtual std::unique_ptr<Connection> Connect(const std::string& endpoint) = 0;
  // Runs `handler` on its own thread for every inbound connection.
  virtual std::unique_ptr<Listener> Listen(const std::string& endpoint, Handler handler) = 0;
};

inline constexpr std::chrono::milliseconds kDefaultReceiveTimeout{60000};

// POSIX TCP. Endpoints are "host:port"; port 0 picks a free port.
std::unique_ptr<Network> MakeTcpNetwork(
    std::chrono::milliseconds receive_timeout = kDefaultReceiveTimeout);

// In-process network. Every frame is delivered `per_frame_delay` after it was
// sent, in order. Endpoints are arbitrary names, conventionally "sim://...".
std::unique_ptr<Network> MakeSimNetwork(
    std::chrono::milliseconds per_frame_delay,
    std::chrono::milliseconds receive_timeout = kDefaultReceiveTimeout);

void WriteMessage(Connection& conn, const Message& msg);
Message ReadMessage(Connection& conn);

// Reads one message and requires it to be a T. A peer ERROR becomes
// Error(<its code>); any other type becomes Error(kProtocol).
template <class T>
T Expect(Connection& conn) {
  Message msg = ReadMessage(conn);
  if (auto* m = std::get_if<T>(&msg)) return std::move(*m);
  if (auto* e = std::get_if<ErrorMsg>(&msg)) {
    throw Error(e->code, "peer error: " + e->text);
  }
  throw Error(ErrorCode::kProtocol,
              "unexpected " + std::string(MsgTypeName(TypeOf(msg))) + " message");
}

// Opens a connection, sends one message and closes.
void SendOneShot(Network& net, const std::string& endpoint, const Message& msg);

}  // namespace ppdt::wire

#endif  // PPDT_WIRE_TRANSPORT_HPP_
