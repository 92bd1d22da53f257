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

#include <string>
#include <thread>

#include "ppdt/compare/session.hpp"
#include "ppdt/errors.hpp"
#include "ppdt/harness/synth.hpp"
#include "ppdt/wire/message.hpp"
#include "ppdt/wire/transport.hpp"
#include "test_support.hpp"
#include "wire_samples.hpp"

namespace ppdt::wire {
namespace {

using ppdt::testing::Frame;
using ppdt::testing::kGolden;
using ppdt::testing::SampleMessages;

DecodeFailure FailureOf(const Bytes& frame) {
  try {
    DecodeFrame(frame);
  } catch (const DecodeError& e) {
    return e.failure();
  }
  ADD_FAILURE() << "frame decoded";
  return DecodeFailure::kMalformedPayload;
}

TEST(WireGolden, EveryCatalogMessageIsByteExact) {
  auto samples = SampleMessages();
  ASSERT_EQ(samples.size(), std::size(kGolden));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SCOPED_TRACE(MsgTypeName(TypeOf(samples[i])));
    const Bytes expected = Frame(0x01, kGolden[i].type, kGolden[i].payload);
    EXPECT_EQ(EncodeFrame(samples[i]), expected);
    EXPECT_EQ(DecodeFrame(expected), samples[i]);
  }
}

TEST(WireGolden, SetupAckIsSixBytes) {
  EXPECT_EQ(EncodeFrame(SetupAckMsg{}), (Bytes{0, 0, 0, 0, 0x01, 0x03}));
}

TEST(WireDecode, DistinctFailures) {
  const std::string body = kGolden[10].payload;
  EXPECT_EQ(FailureOf(Frame(0x02, 0x20, body)), DecodeFailure::kBadVersion);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x21, body)), DecodeFailure::kUnknownType);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x20, body + " ")), DecodeFailure::kMalformedPayload);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x20, "{}")), DecodeFailure::kMalformedPayload);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x03, "{}")), DecodeFailure::kMalformedPayload);
  Bytes truncated = Frame(0x01, 0x20, body);
  truncated.pop_back();
  EXPECT_EQ(FailureOf(truncated), DecodeFailure::kLengthMismatch);
  EXPECT_EQ(FailureOf(Bytes{0, 0, 0}), DecodeFailure::kLengthMismatch);
  EXPECT_EQ(FailureOf(Bytes{0x04, 0, 0, 1, 0x01, 0x20}), DecodeFailure::kTooLarge);
}

TEST(WireDecode, VersionCheckedBeforePayload) {
  // Garbage body: only the header may be looked at.
  EXPECT_EQ(FailureOf(Frame(0x02, 0x20, "\xff\xfe not json")), DecodeFailure::kBadVersion);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x00, "\xff\xfe not json")), DecodeFailure::kUnknownType);
}

TEST(WireDecode, RejectsNonCanonicalPayloads) {
  const char* variants[] = {
      R"({"session":"000102030405060708090a0b0c0d0e0f", "v":12345})",
      R"({"v":12345,"session":"000102030405060708090a0b0c0d0e0f"})",
      R"({"session":"000102030405060708090a0b0c0d0e0f","v":12345.0})",
      R"({"session":"000102030405060708090a0b0c0d0e0f","v":-1})",
      R"({"session":"000102030405060708090a0b0c0d0e0f","v":12345,"x":1})",
      R"({"session":"000102030405060708090A0B0C0D0E0F","v":12345})",
      R"({"session":"0001","v":12345})",
  };
  for (const char* v : variants) {
    EXPECT_EQ(FailureOf(Frame(0x01, 0x13, v)), DecodeFailure::kMalformedPayload) << v;
  }
  // Leading zero byte in a big integer, and base64 padding.
  EXPECT_EQ(FailureOf(Frame(0x01, 0x20,
                            R"({"class":"AJk","session":"000102030405060708090a0b0c0d0e0f"})")),
            DecodeFailure::kMalformedPayload);
  EXPECT_EQ(FailureOf(Frame(0x01, 0x20,
                            R"({"class":"mQ==","session":"000102030405060708090a0b0c0d0e0f"})")),
            DecodeFailure::kMalformedPayload);
}

TEST(WireDecode, SetupFingerprintMustMatchKeys) {
  std::string body = kGolden[1].payload;
  body.replace(body.find("1905e9fb"), 8, "0905e9fb");
  EXPECT_EQ(FailureOf(Frame(0x01, 0x02, body)), DecodeFailure::kMalformedPayload);
}

TEST(WireEncode, ErrorTextWithControlCharactersRoundTrips) {
  ErrorMsg m{compare::NewSessionId(), ErrorCode::kNetwork, "line\nbreak \"quoted\" \x01 \xc3\xa9"};
  EXPECT_EQ(DecodeFrame(EncodeFrame(m)), Message(m));
}

TEST(WireRoundTrip, RealProtocolMessages) {
  auto keys = ppdt::testing::TestKeys(8);
  auto material = keys.Public();
  const auto& pk = keys.paillier.public_key;
  std::vector<Message> msgs;
  msgs.push_back(KeyMaterialMsg{material});
  for (int i = 0; i < 20; ++i) {
    auto sid = compare::NewSessionId();
    std::uint64_t x = RandomBelow(std::uint64_t{256});
    std::uint64_t thr = RandomBelow(std::uint64_t{256});
    auto mode = i % 2 ? compare::CompareMode::kEquality : compare::CompareMode::kNumeric;
    auto [site, blinded] = compare::SiteComparison::Begin(
        sid, pk.Encrypt(x), pk.Encrypt(pk.EncodeSigned(-mpz_class(thr))), mode, material);
    compare::ClientComparison client(keys);
    auto bits = client.OnBlindedValue(blinded);
    auto seq = site.OnBitVector(bits);
    client.OnMaskedSequence(seq);
    auto v = site.RevealShare();
    auto w = client.OnShareV(v);
    msgs.insert(msgs.end(), {blinded, bits, seq, v, w, ResultMsg{sid, pk.Encrypt(i)}});
    levelsite::TraversalToken tok{sid, RandomU64(), {pk.Encrypt(x), pk.Encrypt(thr)},
                                  "10.0.0.1:7000", i % 3 == 0};
    msgs.push_back(ClassifyStartMsg{tok});
    msgs.push_back(TraversalMsg{tok});
  }
  harness::RandomTreeOptions opt;
  for (auto& s : tree::PartitionAndEncrypt(harness::RandomTree(opt), material)) {
    msgs.push_back(SetupMsg{s});
  }
  for (const auto& m : msgs) {
    Bytes f = EncodeFrame(m);
    Message back = DecodeFrame(f);
    ASSERT_EQ(back, m) << MsgTypeName(TypeOf(m));
    ASSERT_EQ(EncodeFrame(back), f);
  }
}

TEST(WireFuzz, TenThousandFramesNeverCrash) {
  auto r = ppdt::testing::FuzzFrames(10000, 0x5eed);
  EXPECT_EQ(r.accepted + r.rejected, 10000u);
  EXPECT_EQ(r.other_exceptions, 0u);
  EXPECT_EQ(r.non_canonical_accepts, 0u);
}

TEST(Transport, SimDeliversInOrderWithDelay) {
  auto net = MakeSimNetwork(std::chrono::milliseconds(20));
  std::vector<Message> got;
  std::mutex mu;
  auto listener = net->Listen("sim://echo", [&](std::unique_ptr<Connection> c) {
    for (int i = 0; i < 3; ++i) {
      Message m = ReadMessage(*c);
      {
        std::lock_guard lock(mu);
        got.push_back(m);
      }
      WriteMessage(*c, m);
    }
  });
  auto conn = net->Connect("sim://echo");
  auto samples = SampleMessages();
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 8; i < 11; ++i) WriteMessage(*conn, samples[i]);
  for (int i = 8; i < 11; ++i) EXPECT_EQ(ReadMessage(*conn), samples[i]);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0).count();
  EXPECT_GE(ms, 40);  // one frame delay each way at least
  listener->Stop();
  EXPECT_EQ(got.size(), 3u);
  EXPECT_THROW(net->Connect("sim://echo"), Error);
}

TEST(Transport, TcpCarriesTheSameBytes) {
  auto net = MakeTcpNetwork(std::chrono::milliseconds(5000));
  std::vector<Bytes> got;
  std::mutex mu;
  auto listener = net->Listen("127.0.0.1:0", [&](std::unique_ptr<Connection> c) {
    for (;;) {
      Bytes f;
      try {
        f = c->ReceiveFrame();
      } catch (const Error&) {
        return;
      }
      std::lock_guard lock(mu);
      got.push_back(f);
    }
  });
  EXPECT_NE(listener->endpoint(), "127.0.0.1:0");
  auto conn = net->Connect(listener->endpoint());
  std::vector<Bytes> sent;
  for (const auto& m : SampleMessages()) {
    sent.push_back(EncodeFrame(m));
    WriteMessage(*conn, m);
  }
  conn->Close();
  for (int i = 0; i < 200; ++i) {
    {
      std::lock_guard lock(mu);
      if (got.size() == sent.size()) break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  listener->Stop();
  EXPECT_EQ(got, sent);
}

TEST(Transport, TcpRejectsOversizeHeaderBeforeReadingBody) {
  auto net = MakeTcpNetwork(std::chrono::milliseconds(5000));
  std::atomic<int> failure{-1};
  auto listener = net->Listen("127.0.0.1:0", [&](std::unique_ptr<Connection> c) {
    try {
      c->ReceiveFrame();
    } catch (const DecodeError& e) {
      failure = static_cast<int>(e.failure());
    }
  });
  auto conn = net->Connect(listener->endpoint());
  // A header announcing 0x7fffffff bytes and no body.
  Bytes header = {0x7f, 0xff, 0xff, 0xff, 0x01, 0x20};
  conn->SendFrame(header);
  for (int i = 0; i < 200 && failure < 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  listener->Stop();
  EXPECT_EQ(failure.load(), static_cast<int>(DecodeFailure::kTooLarge));
}

TEST(Transport, ConnectFailuresAreNetworkErrors) {
  auto tcp = MakeTcpNetwork();
  auto sim = MakeSimNetwork(std::chrono::milliseconds(0));
  for (Network* n : {tcp.get(), sim.get()}) {
    try {
      n->Connect(n == tcp.get() ? "127.0.0.1:1" : "sim://nowhere");
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNetwork);
    }
  }
  EXPECT_THROW(tcp->Connect("no-port"), Error);
}

TEST(Transport, ExpectSurfacesPeerErrors) {
  auto net = MakeSimNetwork(std::chrono::milliseconds(0));
  auto listener = net->Listen("sim://x", [](std::unique_ptr<Connection> c) {
    WriteMessage(*c, ErrorMsg{{}, ErrorCode::kRange, "nope"});
    WriteMessage(*c, SetupAckMsg{});
  });
  auto conn = net->Connect("sim://x");
  try {
    Expect<ResultMsg>(*conn);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRange);
  }
  try {
    Expect<ResultMsg>(*conn);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

}  // namespace
}  // namespace ppdt::wire
