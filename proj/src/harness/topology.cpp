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

#include "ppdt/harness/topology.hpp"

#include "ppdt/errors.hpp"

namespace ppdt::harness {

void DeploySlices(wire::Network& net, const std::vector<tree::LevelSlice>& slices,
                  const std::vector<std::string>& endpoints) {
  if (slices.size() != endpoints.size()) {
    throw Error(ErrorCode::kParameter, std::to_string(slices.size()) + " slices but " +
                                           std::to_string(endpoints.size()) + " endpoints");
  }
  for (std::size_t l = 0; l < slices.size(); ++l) {
    auto conn = net.Connect(endpoints[l]);
    wire::WriteMessage(*conn, wire::SetupMsg{slices[l]});
    wire::Expect<wire::SetupAckMsg>(*conn);
    conn->Close();
  }
}

Topology::Topology(const tree::TreeModel& model, const he::ClientKeys& keys,
                   TopologyOptions options)
    : options_(std::move(options)), telemetry_(std::make_shared<levelsite::Telemetry>()) {
  const bool sim = options_.transport == TransportKind::kSimulated;
  net_ = sim ? wire::MakeSimNetwork(options_.hop_delay) : wire::MakeTcpNetwork();
  const auto slices = tree::PartitionAndEncrypt(model, keys.Public());
  const std::size_t d = slices.size();
  sites_.resize(d);
  endpoints_.resize(d);
  // Bottom-up, so every site knows where its downstream listens.
  for (std::size_t i = d; i-- > 0;) {
    levelsite::SiteConfig cfg;
    cfg.level = i;
    if (i + 1 < d) cfg.downstream = endpoints_[i + 1];
    cfg.pad_response = options_.padding;
    cfg.bogus_continuation = options_.bogus_continuation;
    sites_[i] = std::make_unique<levelsite::LevelSite>(*net_, cfg, telemetry_);
    sites_[i]->Start(sim ? "sim://level-" + std::to_string(i) : "127.0.0.1:0");
    endpoints_[i] = sites_[i]->endpoint();
  }
  DeploySlices(*net_, slices, endpoints_);
  client_ = std::make_unique<Client>(*net_, keys);
  client_->Start(sim ? "sim://client" : "127.0.0.1:0");
}

Topology::~Topology() {
  if (client_) client_->Stop();
  for (auto& s : sites_) {
    if (s) s->Stop();
  }
}

ClientResult Topology::Classify(const tree::FeatureVector& fv) {
  return client_->Classify(fv, endpoints_.at(0));
}

levelsite::QueryTrace Topology::WaitTrace(const compare::SessionId& session,
                                          std::chrono::milliseconds timeout) {
  if (!telemetry_->WaitComplete(session, timeout)) {
    throw Error(ErrorCode::kNetwork, "query did not finish all its hops in time");
  }
  return telemetry_->Get(session);
}

}  // namespace ppdt::harness
