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

#ifndef PPDT_LEVELSITE_SITE_HPP_
#define PPDT_LEVELSITE_SITE_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>

#include "ppdt/compare/session.hpp"
#include "ppdt/levelsite/token.hpp"
#include "ppdt/tree/slice.hpp"
#include "ppdt/wire/transport.hpp"

namespace ppdt::levelsite {

// Uniform random response delay, in milliseconds, inclusive.
struct PaddingRange {
  std::uint32_t min_ms = 0;
  std::uint32_t max_ms = 0;
  // Throws Error(kParameter) if min > max.
  void Validate() const;
};

std::chrono::microseconds DrawPadding(const PaddingRange& range);
// Sleeps for a fresh draw. No-op when unset.
void ApplyPadding(const std::optional<PaddingRange>& range);

struct SiteConfig {
  std::size_t level = 0;
  std::optional<tree::LevelSlice> slice;  // may instead arrive via SETUP
  std::optional<std::string> downstream;  // absent on the last level
  std::optional<PaddingRange> pad_response;
  bool bogus_continuation = false;
};

// What the level's node scan decided for one token.
struct ReplyDecision {
  he::Ciphertext enc_class;  // already re-randomized
};
struct CompareDecision {
  tree::EncInternal node;
};
struct BogusDecision {};
using Decision = std::variant<ReplyDecision, CompareDecision, BogusDecision>;

// Visits every node of the slice (no early exit) and picks the one named by
// the token. Throws Error(kProtocol) for an out-of-range index or a feature
// count that does not match the slice.
Decision ScanLevel(const tree::LevelSlice& slice, const TraversalToken& token);

// Per-query hop accounting, shared by the sites of one process.
struct QueryTrace {
  std::size_t forwards = 0;        // TRAVERSAL messages sent downstream
  std::size_t bogus_forwards = 0;  // of which bogus
  std::size_t comparisons = 0;     // with the client
  std::size_t dummy_comparisons = 0;
  std::optional<std::size_t> reply_level;
  bool failed = false;
  bool complete = false;
};

class Telemetry {
 public:
  template <class F>
  void Update(const compare::SessionId& session, F&& f) {
    std::lock_guard lock(mu_);
    f(traces_[session]);
    cv_.notify_all();
  }
  QueryTrace Get(const compare::SessionId& session) const;
  // True once the last hop of the query has finished.
  bool WaitComplete(const compare::SessionId& session, std::chrono::milliseconds timeout) const;

 private:
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::map<compare::SessionId, QueryTrace> traces_;
};

// One level-site daemon.
class LevelSite {
 public:
  LevelSite(wire::Network& net, SiteConfig config,
            std::shared_ptr<Telemetry> telemetry = nullptr);
  ~LevelSite();
  LevelSite(const LevelSite&) = delete;
  LevelSite& operator=(const LevelSite&) = delete;

  void Start(const std::string& listen_endpoint);
  std::string endpoint() const;
  void Stop();

  // Installing the same slice twice is a no-op. A different slice under the
  // same key fingerprint is refused; a new fingerprint replaces the old one.
  // Throws Error(kParameter) on a level or topology mismatch.
  void Install(const tree::LevelSlice& slice);
  bool installed() const;

  // Serves one inbound connection: SETUP, CLASSIFY_START or TRAVERSAL.
  void HandleConnection(std::unique_ptr<wire::Connection> conn);
  // Runs the level's step for one token, including every outbound message.
  void Process(const TraversalToken& token);

 private:
  std::shared_ptr<const tree::LevelSlice> CurrentSlice() const;
  void RunComparison(const tree::LevelSlice& slice, const tree::EncInternal& node,
                     const TraversalToken& token);
  void RunDummyComparison(const tree::LevelSlice& slice, const TraversalToken& token);
  void Reply(const tree::LevelSlice& slice, const ReplyDecision& reply,
             const TraversalToken& token);
  void Forward(const tree::LevelSlice& slice, TraversalToken token);
  void SendError(const TraversalToken& token, ErrorCode code, const std::string& text);
  bool IsLast(const tree::LevelSlice& slice) const;
  void Trace(const compare::SessionId& session, const std::function<void(QueryTrace&)>& f);

  wire::Network& net_;
  SiteConfig config_;
  std::shared_ptr<Telemetry> telemetry_;
  mutable std::mutex mu_;
  std::shared_ptr<const tree::LevelSlice> slice_;
  std::unique_ptr<wire::Listener> listener_;
};

}  // namespace ppdt::levelsite

#endif  // PPDT_LEVELSITE_SITE_HPP_
