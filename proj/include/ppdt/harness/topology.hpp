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

#ifndef PPDT_HARNESS_TOPOLOGY_HPP_
#define PPDT_HARNESS_TOPOLOGY_HPP_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppdt/harness/client.hpp"
#include "ppdt/levelsite/site.hpp"
#include "ppdt/tree/model.hpp"
#include "ppdt/tree/slice.hpp"
#include "ppdt/wire/transport.hpp"

namespace ppdt::harness {

// Sends each slice to its level-site as SETUP and waits for SETUP_ACK.
// endpoints[l] serves level l.
void DeploySlices(wire::Network& net, const std::vector<tree::LevelSlice>& slices,
                  const std::vector<std::string>& endpoints);

enum class TransportKind { kSimulated, kTcp };

struct TopologyOptions {
  TransportKind transport = TransportKind::kSimulated;
  // Simulated transport only: added to every frame.
  std::chrono::milliseconds hop_delay{0};
  std::optional<levelsite::PaddingRange> padding;
  bool bogus_continuation = false;
};

// d level-sites and one client in this process, wired as in a deployment.
// Both transports run the same protocol code over the same frames.
class Topology {
 public:
  Topology(const tree::TreeModel& model, const he::ClientKeys& keys, TopologyOptions options);
  ~Topology();
  Topology(const Topology&) = delete;
  Topology& operator=(const Topology&) = delete;

  ClientResult Classify(const tree::FeatureVector& fv);
  // Waits until every hop of the query is done, then returns its trace.
  levelsite::QueryTrace WaitTrace(const compare::SessionId& session,
                                  std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

  std::size_t depth() const { return sites_.size(); }
  const std::vector<std::string>& endpoints() const { return endpoints_; }
  const TopologyOptions& options() const { return options_; }
  Client& client() { return *client_; }
  levelsite::LevelSite& site(std::size_t level) { return *sites_.at(level); }

 private:
  TopologyOptions options_;
  std::unique_ptr<wire::Network> net_;
  std::shared_ptr<levelsite::Telemetry> telemetry_;
  std::vector<std::unique_ptr<levelsite::LevelSite>> sites_;
  std::vector<std::string> endpoints_;
  std::unique_ptr<Client> client_;
};

}  // namespace ppdt::harness

#endif  // PPDT_HARNESS_TOPOLOGY_HPP_
