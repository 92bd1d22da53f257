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

#ifndef PPDT_HARNESS_CLIENT_HPP_
#define PPDT_HARNESS_CLIENT_HPP_

#include <chrono>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ppdt/compare/session.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/tree/model.hpp"
#include "ppdt/wire/transport.hpp"

namespace ppdt::harness {

struct ClientResult {
  compare::SessionId session{};
  std::uint64_t class_id = 0;
  // One entry per comparison round this query ran with the client.
  std::vector<compare::WorkCounters> comparisons;
};

// The querying party. Owns the private keys, answers comparison rounds for
// its own pending queries and collects the encrypted result.
class Client {
 public:
  Client(wire::Network& net, he::ClientKeys keys);
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  void Start(const std::string& listen_endpoint);
  std::string endpoint() const;
  void Stop();

  const he::ClientKeys& keys() const { return keys_; }

  // Encrypts fv, hands it to level-site 0 and waits for RESULT or ERROR.
  // Throws Error(kRange) for values of t bits or more, Error(kNetwork) on
  // timeout, and the peer's code when a level-site reports an error.
  ClientResult Classify(const tree::FeatureVector& fv, const std::string& entry,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds(60000));

  void HandleConnection(std::unique_ptr<wire::Connection> conn);

 private:
  struct Pending {
    std::promise<std::uint64_t> result;
    bool settled = false;
    std::vector<compare::WorkCounters> comparisons;
  };

  void Settle(const compare::SessionId& session, std::uint64_t class_id);
  void Fail(const compare::SessionId& session, const Error& error);
  bool IsPending(const compare::SessionId& session);
  void RunComparison(wire::Connection& conn, const compare::BlindedValueMsg& first);

  wire::Network& net_;
  he::ClientKeys keys_;
  std::mutex mu_;
  std::map<compare::SessionId, std::shared_ptr<Pending>> pending_;
  std::unique_ptr<wire::Listener> listener_;
};

}  // namespace ppdt::harness

#endif  // PPDT_HARNESS_CLIENT_HPP_
