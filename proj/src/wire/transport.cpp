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

#include "ppdt/wire/transport.hpp"

namespace ppdt::wire {

void WriteMessage(Connection& conn, const Message& msg) { conn.SendFrame(EncodeFrame(msg)); }

Message ReadMessage(Connection& conn) { return DecodeFrame(conn.ReceiveFrame()); }

void SendOneShot(Network& net, const std::string& endpoint, const Message& msg) {
  auto conn = net.Connect(endpoint);
  WriteMessage(*conn, msg);
  conn->Close();
}

}  // namespace ppdt::wire
