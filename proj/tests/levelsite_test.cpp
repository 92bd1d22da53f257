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

#include <gtest/gtest.h>

#include <thread>

#include "ppdt/errors.hpp"
#include "ppdt/harness/synth.hpp"
#include "ppdt/harness/topology.hpp"
#include "ppdt/levelsite/site.hpp"
#include "test_support.hpp"

namespace ppdt::levelsite {
namespace {

using Clock = std::chrono::steady_clock;
using ppdt::testing::TestKeys;
using tree::CompareMode;
using tree::InternalNode;
using tree::LeafNode;
using tree::TreeModel;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

TreeModel Stump(std::uint64_t threshold) {
  TreeModel m;
  m.schema.attributes.push_back({"x", tree::AttributeKind::kNumeric, {}});
  m.schema.classes = {"low", "high"};
  m.levels = {{InternalNode{0, threshold, CompareMode::kNumeric, 1, 0}},
              {LeafNode{0}, LeafNode{1}}};
  return m;
}

TraversalToken TokenFor(const he::ClientKeys& keys, std::vector<std::uint64_t> fv,
                        std::uint64_t index, const std::string& client) {
  TraversalToken t{compare::NewSessionId(), index, {}, client, false};
  for (auto x : fv) t.enc_features.push_back(keys.paillier.public_key.Encrypt(x));
  return t;
}

TEST(ScanLevel, LeafRepliesWithFreshCiphertext) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  tree::LevelSlice slice{2, 3, 1, {tree::EncLeaf{pk.Encrypt(4)}}, keys.Public()};
  auto token = TokenFor(keys, {0}, 0, "sim://c");
  auto d = ScanLevel(slice, token);
  auto* reply = std::get_if<ReplyDecision>(&d);
  ASSERT_NE(reply, nullptr);
  EXPECT_EQ(keys.paillier.private_key.Decrypt(reply->enc_class), 4);
  EXPECT_NE(reply->enc_class, std::get<tree::EncLeaf>(slice.nodes[0]).enc_class);
}

TEST(ScanLevel, PicksTheIndexedNodeAndRejectsBadTokens) {
  auto keys = TestKeys();
  auto slices = tree::PartitionAndEncrypt(Stump(5), keys.Public());
  auto d = ScanLevel(slices[0], TokenFor(keys, {9}, 0, "c"));
  ASSERT_TRUE(std::holds_alternative<CompareDecision>(d));
  EXPECT_EQ(std::get<CompareDecision>(d).node, std::get<tree::EncInternal>(slices[0].nodes[0]));

  auto code = [&](const TraversalToken& t, const tree::LevelSlice& s) {
    try {
      ScanLevel(s, t);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code(TokenFor(keys, {9}, 2, "c"), slices[1]), ErrorCode::kProtocol);
  EXPECT_EQ(code(TokenFor(keys, {9, 1}, 0, "c"), slices[1]), ErrorCode::kProtocol);

  auto bogus = TokenFor(keys, {9}, 1u << 30, "c");
  bogus.bogus = true;
  EXPECT_TRUE(std::holds_alternative<BogusDecision>(ScanLevel(slices[1], bogus)));
}

TEST(Padding, ZeroRangeAddsNoDelay) {
  EXPECT_EQ(DrawPadding({0, 0}).count(), 0);
  auto t0 = Clock::now();
  ApplyPadding(PaddingRange{0, 0});
  ApplyPadding(std::nullopt);
  EXPECT_LT(MsSince(t0), 5.0);
}

TEST(Padding, DrawsStayInRange) {
  for (int i = 0; i < 10000; ++i) {
    auto us = DrawPadding({500, 1000}).count();
    ASSERT_GE(us, 500000);
    ASSERT_LE(us, 1000000);
  }
  EXPECT_THROW(DrawPadding({10, 5}), Error);
}

// Measures `n` ApplyPadding calls, run concurrently so the test stays short.
std::vector<double> MeasurePadding(PaddingRange range, int n) {
  std::vector<double> ms(n);
  std::vector<std::thread> threads;
  for (int i = 0; i < n; ++i) {
    threads.emplace_back([&, i] {
      auto t0 = Clock::now();
      ApplyPadding(range);
      ms[i] = MsSince(t0);
    });
  }
  for (auto& t : threads) t.join();
  return ms;
}

TEST(Padding, HundredSamplesHaveUniformMean) {
  auto ms = MeasurePadding({100, 200}, 100);
  double mean = 0;
  for (double m : ms) mean += m / ms.size();
  EXPECT_GE(mean, 140.0);
  EXPECT_LE(mean, 160.0);
}

TEST(Padding, HalfToOneSecond) {
  // Oversleep slack for the scheduler.
  constexpr double kSlackMs = 25.0;
  for (double m : MeasurePadding({500, 1000}, 8)) {
    EXPECT_GE(m, 500.0);
    EXPECT_LE(m, 1000.0 + kSlackMs);
  }
}

TEST(LevelSite, InstallRules) {
  auto keys = TestKeys();
  auto net = wire::MakeSimNetwork(std::chrono::milliseconds(0));
  auto slices = tree::PartitionAndEncrypt(Stump(5), keys.Public());
  LevelSite top(*net, SiteConfig{0, std::nullopt, std::nullopt, std::nullopt, false});
  EXPECT_THROW(top.Install(slices[0]), Error);  // no downstream for a non-last level
  LevelSite site(*net, SiteConfig{1, std::nullopt, std::nullopt, std::nullopt, false});
  EXPECT_THROW(site.Install(slices[0]), Error);  // wrong level
  site.Install(slices[1]);
  site.Install(slices[1]);  // idempotent
  EXPECT_TRUE(site.installed());
  auto other = tree::PartitionAndEncrypt(Stump(5), keys.Public());
  EXPECT_THROW(site.Install(other[1]), Error);
  EXPECT_THROW((PaddingRange{3, 2}.Validate()), Error);
}

TEST(LevelSite, SetupOverTheWireIsAcknowledged) {
  auto keys = TestKeys();
  auto net = wire::MakeSimNetwork(std::chrono::milliseconds(0));
  auto slices = tree::PartitionAndEncrypt(Stump(5), keys.Public());
  LevelSite site(*net, SiteConfig{1, std::nullopt, std::nullopt, std::nullopt, false});
  site.Start("sim://level-1");
  auto conn = net->Connect("sim://level-1");
  wire::WriteMessage(*conn, wire::SetupMsg{slices[1]});
  EXPECT_TRUE(std::holds_alternative<wire::SetupAckMsg>(wire::ReadMessage(*conn)));
  auto again = net->Connect("sim://level-1");
  wire::WriteMessage(*again, wire::SetupMsg{slices[0]});
  auto reply = wire::ReadMessage(*again);
  ASSERT_TRUE(std::holds_alternative<wire::ErrorMsg>(reply));
  EXPECT_EQ(std::get<wire::ErrorMsg>(reply).code, ErrorCode::kParameter);
}

TEST(LevelSite, NumericNodeForwardsTrueChild) {
  // T = 5, x = 9: 5 <= 9 so the true child (index 1) is taken.
  auto keys = TestKeys();
  harness::Topology topo(Stump(5), keys, {});
  auto r = topo.Classify({9});
  EXPECT_EQ(r.class_id, 1u);
  auto trace = topo.WaitTrace(r.session);
  EXPECT_EQ(trace.comparisons, 1u);
  EXPECT_EQ(trace.forwards, 1u);
  EXPECT_EQ(trace.reply_level, 1u);
  EXPECT_EQ(topo.Classify({5}).class_id, 1u);  // inclusive tie
  EXPECT_EQ(topo.Classify({4}).class_id, 0u);
}

TEST(LevelSite, OutOfRangeIndexIsReportedToTheClient) {
  auto keys = TestKeys();
  auto net = wire::MakeSimNetwork(std::chrono::milliseconds(0));
  auto slices = tree::PartitionAndEncrypt(Stump(5), keys.Public());
  LevelSite site(*net, SiteConfig{1, slices[1], std::nullopt, std::nullopt, false});
  site.Start("sim://level-1");
  std::promise<wire::Message> got;
  auto probe = net->Listen("sim://probe", [&](std::unique_ptr<wire::Connection> c) {
    got.set_value(wire::ReadMessage(*c));
  });
  auto token = TokenFor(keys, {1}, 7, "sim://probe");
  wire::SendOneShot(*net, "sim://level-1", wire::TraversalMsg{token});
  auto fut = got.get_future();
  ASSERT_EQ(fut.wait_for(std::chrono::seconds(10)), std::future_status::ready);
  auto msg = fut.get();
  ASSERT_TRUE(std::holds_alternative<wire::ErrorMsg>(msg));
  EXPECT_EQ(std::get<wire::ErrorMsg>(msg).code, ErrorCode::kProtocol);
  EXPECT_EQ(std::get<wire::ErrorMsg>(msg).session, token.session);
}

TEST(LevelSite, BogusTokenNeverContactsTheClient) {
  auto keys = TestKeys();
  auto net = wire::MakeSimNetwork(std::chrono::milliseconds(0));
  auto telemetry = std::make_shared<Telemetry>();
  auto slices = tree::PartitionAndEncrypt(harness::SpineTree(3), keys.Public());
  LevelSite l1(*net, SiteConfig{1, slices[1], "sim://level-2", std::nullopt, false}, telemetry);
  LevelSite l2(*net, SiteConfig{2, slices[2], "sim://level-3", std::nullopt, false}, telemetry);
  LevelSite l3(*net, SiteConfig{3, slices[3], std::nullopt, std::nullopt, false}, telemetry);
  l1.Start("sim://level-1");
  l2.Start("sim://level-2");
  l3.Start("sim://level-3");
  std::atomic<int> client_contacts{0};
  auto probe = net->Listen("sim://probe", [&](std::unique_ptr<wire::Connection>) {
    ++client_contacts;
  });
  auto token = TokenFor(keys, {2}, 99999, "sim://probe");
  token.bogus = true;
  wire::SendOneShot(*net, "sim://level-1", wire::TraversalMsg{token});
  ASSERT_TRUE(telemetry->WaitComplete(token.session, std::chrono::seconds(10)));
  auto trace = telemetry->Get(token.session);
  EXPECT_EQ(trace.forwards, 2u);
  EXPECT_EQ(trace.bogus_forwards, 2u);
  EXPECT_EQ(trace.dummy_comparisons, 3u);
  EXPECT_EQ(trace.comparisons, 0u);
  EXPECT_FALSE(trace.reply_level.has_value());
  EXPECT_EQ(client_contacts.load(), 0);
}

TEST(LevelSite, DownstreamUnreachableReachesTheClient) {
  auto keys = TestKeys();
  harness::Topology topo(harness::SpineTree(2), keys, {});
  topo.site(2).Stop();
  try {
    topo.Classify({5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetwork);
  }
  EXPECT_EQ(topo.Classify({0}).class_id, 1u);  // terminates above the dead site
}

TEST(LevelSite, BogusContinuationGivesFullDepthTraffic) {
  auto keys = TestKeys();
  harness::TopologyOptions opt;
  opt.bogus_continuation = true;
  TreeModel spine = harness::SpineTree(4);
  harness::Topology topo(spine, keys, opt);
  for (std::size_t level = 1; level <= 4; ++level) {
    auto fv = harness::SynthesizeForLevel(spine, level, keys.params.t);
    ASSERT_TRUE(fv);
    auto r = topo.Classify(*fv);
    EXPECT_EQ(r.class_id, level);
    auto trace = topo.WaitTrace(r.session);
    EXPECT_EQ(trace.forwards, 4u);
    EXPECT_EQ(trace.bogus_forwards, 4u - level);
    EXPECT_EQ(trace.comparisons, level);
    EXPECT_EQ(trace.reply_level, level);
    EXPECT_EQ(r.comparisons.size(), level);
  }
}

TEST(LevelSite, PaddedRepliesAreDelayed) {
  auto keys = TestKeys();
  harness::TopologyOptions opt;
  opt.padding = PaddingRange{60, 80};
  harness::Topology topo(Stump(5), keys, opt);
  auto t0 = Clock::now();
  EXPECT_EQ(topo.Classify({6}).class_id, 1u);
  // Two action messages: the forward and the result.
  EXPECT_GE(MsSince(t0), 120.0);
}

TEST(LevelSite, ConcurrentQueriesAreIndependent) {
  auto keys = TestKeys();
  harness::Topology topo(Stump(100), keys, {});
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&, i] {
      const std::uint64_t x = 95 + static_cast<std::uint64_t>(i) * 2;
      if (topo.Classify({x}).class_id == (x >= 100 ? 1u : 0u)) ++ok;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 6);
}

}  // namespace
}  // namespace ppdt::levelsite
