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

#include "ppdt/levelsite/site.hpp"

#include <thread>

#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"

namespace ppdt::levelsite {

using compare::SessionId;
using tree::EncInternal;
using tree::EncLeaf;
using tree::LevelSlice;

void PaddingRange::Validate() const {
  if (min_ms > max_ms) {
    throw Error(ErrorCode::kParameter, "padding: min_ms exceeds max_ms");
  }
}

std::chrono::microseconds DrawPadding(const PaddingRange& range) {
  range.Validate();
  const std::uint64_t lo = std::uint64_t{range.min_ms} * 1000;
  const std::uint64_t span = std::uint64_t{range.max_ms} * 1000 - lo + 1;
  return std::chrono::microseconds(lo + RandomBelow(span));
}

void ApplyPadding(const std::optional<PaddingRange>& range) {
  if (!range || range->max_ms == 0) return;
  std::this_thread::sleep_for(DrawPadding(*range));
}

Decision ScanLevel(const LevelSlice& slice, const TraversalToken& token) {
  if (token.enc_features.size() != slice.attribute_count) {
    throw Error(ErrorCode::kProtocol, "token carries " +
                                          std::to_string(token.enc_features.size()) +
                                          " features, slice expects " +
                                          std::to_string(slice.attribute_count));
  }
  if (token.bogus) return BogusDecision{};
  const tree::SliceNode* chosen = nullptr;
  for (std::size_t k = 0; k < slice.nodes.size(); ++k) {
    // Full pass over the level, whichever node is in scope.
    const bool in_scope = k == token.next_index;
    chosen = in_scope ? &slice.nodes[k] : chosen;
  }
  if (!chosen) {
    throw Error(ErrorCode::kProtocol, "next_index " + std::to_string(token.next_index) +
                                          " out of range at level " +
                                          std::to_string(slice.level));
  }
  if (const auto* leaf = std::get_if<EncLeaf>(chosen)) {
    return ReplyDecision{slice.keys.paillier.Rerandomize(leaf->enc_class)};
  }
  return CompareDecision{std::get<EncInternal>(*chosen)};
}

QueryTrace Telemetry::Get(const SessionId& session) const {
  std::lock_guard lock(mu_);
  auto it = traces_.find(session);
  return it == traces_.end() ? QueryTrace{} : it->second;
}

bool Telemetry::WaitComplete(const SessionId& session,
                             std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] {
    auto it = traces_.find(session);
    return it != traces_.end() && it->second.complete;
  });
}

LevelSite::LevelSite(wire::Network& net, SiteConfig config,
                     std::shared_ptr<Telemetry> telemetry)
    : net_(net), config_(std::move(config)), telemetry_(std::move(telemetry)) {
  if (config_.pad_response) config_.pad_response->Validate();
  if (config_.slice) {
    auto slice = std::move(*config_.slice);
    config_.slice.reset();
    Install(slice);
  }
}

LevelSite::~LevelSite() { Stop(); }

void LevelSite::Start(const std::string& listen_endpoint) {
  listener_ = net_.Listen(listen_endpoint, [this](std::unique_ptr<wire::Connection> c) {
    HandleConnection(std::move(c));
  });
}

std::string LevelSite::endpoint() const { return listener_ ? listener_->endpoint() : ""; }

void LevelSite::Stop() {
  if (listener_) listener_->Stop();
}

void LevelSite::Install(const LevelSlice& slice) {
  if (slice.level != config_.level) {
    throw Error(ErrorCode::kParameter, "slice for level " + std::to_string(slice.level) +
                                           " sent to level " + std::to_string(config_.level));
  }
  if (slice.depth == 0 || slice.level >= slice.depth) {
    throw Error(ErrorCode::kParameter, "slice level outside its tree depth");
  }
  if (slice.level + 1 < slice.depth && !config_.downstream) {
    throw Error(ErrorCode::kParameter, "level " + std::to_string(slice.level) +
                                           " needs a downstream endpoint");
  }
  slice.keys.params.ValidateAgainst(slice.keys.paillier, slice.keys.dgk);
  std::lock_guard lock(mu_);
  if (slice_ && slice_->fingerprint() == slice.fingerprint()) {
    if (*slice_ == slice) return;
    throw Error(ErrorCode::kParameter, "a different slice is installed under this key");
  }
  slice_ = std::make_shared<const LevelSlice>(slice);
}

bool LevelSite::installed() const { return CurrentSlice() != nullptr; }

std::shared_ptr<const LevelSlice> LevelSite::CurrentSlice() const {
  std::lock_guard lock(mu_);
  return slice_;
}

bool LevelSite::IsLast(const LevelSlice& slice) const {
  return slice.level + 1 >= slice.depth;
}

void LevelSite::Trace(const SessionId& session, const std::function<void(QueryTrace&)>& f) {
  if (telemetry_) telemetry_->Update(session, f);
}

void LevelSite::HandleConnection(std::unique_ptr<wire::Connection> conn) {
  wire::Message msg;
  try {
    msg = wire::ReadMessage(*conn);
  } catch (const Error&) {
    return;  // nothing sensible to answer
  }
  if (auto* setup = std::get_if<wire::SetupMsg>(&msg)) {
    try {
      Install(setup->slice);
      wire::WriteMessage(*conn, wire::SetupAckMsg{});
    } catch (const Error& e) {
      try {
        wire::WriteMessage(*conn, wire::ErrorMsg{{}, e.code(), e.what()});
      } catch (const Error&) {
      }
    }
    return;
  }
  const TraversalToken* token = nullptr;
  if (auto* start = std::get_if<wire::ClassifyStartMsg>(&msg)) {
    if (config_.level == 0) token = &start->token;
  } else if (auto* hop = std::get_if<wire::TraversalMsg>(&msg)) {
    if (config_.level != 0) token = &hop->token;
  }
  if (!token) {
    try {
      wire::WriteMessage(*conn, wire::ErrorMsg{{}, ErrorCode::kProtocol,
                                               std::string("level-site cannot accept ") +
                                                   std::string(wire::MsgTypeName(wire::TypeOf(msg)))});
    } catch (const Error&) {
    }
    return;
  }
  conn->Close();
  Process(*token);
}

void LevelSite::Process(const TraversalToken& token) {
  auto slice = CurrentSlice();
  try {
    if (!slice) throw Error(ErrorCode::kProtocol, "no slice installed at this level");
    Decision d = ScanLevel(*slice, token);
    if (auto* reply = std::get_if<ReplyDecision>(&d)) {
      Reply(*slice, *reply, token);
    } else if (auto* cmp = std::get_if<CompareDecision>(&d)) {
      RunComparison(*slice, cmp->node, token);
    } else {
      RunDummyComparison(*slice, token);
    }
  } catch (const Error& e) {
    Trace(token.session, [](QueryTrace& q) {
      q.failed = true;
      q.complete = true;
    });
    if (!token.bogus) SendError(token, e.code(), e.what());
  }
}

void LevelSite::RunComparison(const LevelSlice& slice, const EncInternal& node,
                              const TraversalToken& token) {
  int beta = 0;
  {
    auto conn = net_.Connect(token.client_endpoint);
    auto [site, blinded] = compare::SiteComparison::Begin(
        token.session, token.enc_features.at(node.attribute), node.enc_neg_threshold,
        node.mode, slice.keys);
    try {
      wire::WriteMessage(*conn, blinded);
      auto bits = wire::Expect<compare::BitVectorMsg>(*conn);
      wire::WriteMessage(*conn, site.OnBitVector(bits));
      wire::WriteMessage(*conn, site.RevealShare());
      beta = site.Finish(wire::Expect<compare::ShareWMsg>(*conn));
    } catch (const Error& e) {
      site.Abort();
      try {
        wire::WriteMessage(*conn, wire::ErrorMsg{token.session, e.code(), e.what()});
      } catch (const Error&) {
      }
      throw;
    }
    conn->Close();
  }
  Trace(token.session, [](QueryTrace& q) { ++q.comparisons; });
  TraversalToken next = token;
  next.next_index = beta ? node.true_child : node.false_child;
  Forward(slice, std::move(next));
}

void LevelSite::RunDummyComparison(const LevelSlice& slice, const TraversalToken& token) {
  // Same site-side work as a real round, against locally made bits.
  const auto& keys = slice.keys;
  const auto& pk = keys.paillier;
  he::Ciphertext x = token.enc_features.empty() ? pk.Encrypt(0) : token.enc_features[0];
  auto [site, blinded] = compare::SiteComparison::Begin(token.session, x, pk.Encrypt(0),
                                                        compare::CompareMode::kNumeric, keys);
  compare::BitVectorMsg bits{token.session, {}};
  for (int i = 0; i <= keys.params.t; ++i) {
    bits.bits.push_back(keys.dgk.Encrypt(RandomBelow(std::uint64_t{2})));
  }
  site.OnBitVector(bits);
  const auto v = site.RevealShare();
  site.Finish(compare::ShareWMsg{token.session, v.v});
  Trace(token.session, [](QueryTrace& q) { ++q.dummy_comparisons; });
  if (IsLast(slice)) {
    Trace(token.session, [](QueryTrace& q) { q.complete = true; });
    return;
  }
  TraversalToken next = token;
  next.next_index = RandomU64() & 0xffffffffu;
  for (auto& c : next.enc_features) c = pk.Rerandomize(c);
  Forward(slice, std::move(next));
}

void LevelSite::Reply(const LevelSlice& slice, const ReplyDecision& reply,
                      const TraversalToken& token) {
  ApplyPadding(config_.pad_response);
  wire::SendOneShot(net_, token.client_endpoint, wire::ResultMsg{token.session, reply.enc_class});
  const bool continue_bogus = config_.bogus_continuation && !IsLast(slice);
  Trace(token.session, [&](QueryTrace& q) {
    q.reply_level = slice.level;
    if (!continue_bogus) q.complete = true;
  });
  if (!continue_bogus) return;
  TraversalToken next = token;
  next.bogus = true;
  next.next_index = RandomU64() & 0xffffffffu;
  for (auto& c : next.enc_features) c = slice.keys.paillier.Rerandomize(c);
  try {
    Forward(slice, std::move(next));
  } catch (const Error&) {
    // The client already has its answer.
    Trace(token.session, [](QueryTrace& q) { q.complete = true; });
  }
}

void LevelSite::Forward(const LevelSlice& slice, TraversalToken token) {
  if (IsLast(slice) || !config_.downstream) {
    throw Error(ErrorCode::kProtocol, "no level below " + std::to_string(slice.level));
  }
  ApplyPadding(config_.pad_response);
  // Counted before sending: the next hop may finish the query at once.
  Trace(token.session, [bogus = token.bogus](QueryTrace& q) {
    ++q.forwards;
    if (bogus) ++q.bogus_forwards;
  });
  try {
    wire::SendOneShot(net_, *config_.downstream, wire::TraversalMsg{std::move(token)});
  } catch (const Error& e) {
    throw Error(ErrorCode::kNetwork, "downstream level-site unreachable: " + std::string(e.what()));
  }
}

void LevelSite::SendError(const TraversalToken& token, ErrorCode code, const std::string& text) {
  try {
    wire::SendOneShot(net_, token.client_endpoint, wire::ErrorMsg{token.session, code, text});
  } catch (const Error&) {
    // Client gone; nothing else to tell.
  }
}

}  // namespace ppdt::levelsite
