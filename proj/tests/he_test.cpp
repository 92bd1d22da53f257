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

#include <set>
#include <string>

#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"
#include "ppdt/he/dgk.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/he/paillier.hpp"
#include "ppdt/he/params.hpp"
#include "test_support.hpp"

namespace ppdt::he {
namespace {

using ppdt::testing::DgkDecryptOracle;
using ppdt::testing::TestKeys;

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kIo;
}

TEST(PaillierKeygen, ModulusHasRequestedSize) {
  auto kp = PaillierKeygen(512);
  EXPECT_GE(kp.public_key.bits(), 511u);
  EXPECT_LE(kp.public_key.bits(), 513u);
}

TEST(PaillierKeygen, RejectsUnsupportedSizes) {
  EXPECT_EQ(CodeOf([] { PaillierKeygen(256); }), ErrorCode::kParameter);
  EXPECT_EQ(CodeOf([] { PaillierKeygen(1000); }), ErrorCode::kParameter);
}

TEST(PaillierKeygen, FreshKeysRoundTripAndDiffer) {
  auto a = PaillierKeygen(512);
  auto b = PaillierKeygen(512);
  EXPECT_NE(a.public_key.n(), b.public_key.n());
  for (int i = 0; i < 100; ++i) {
    mpz_class m = RandomBelow(a.public_key.n());
    EXPECT_EQ(a.private_key.Decrypt(a.public_key.Encrypt(m)), m);
  }
}

TEST(Paillier, ZeroAndBoundary) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  const auto& sk = keys.paillier.private_key;
  EXPECT_EQ(sk.Decrypt(pk.Encrypt(0)), 0);
  mpz_class top = pk.n() - 1;
  EXPECT_EQ(sk.Decrypt(pk.Encrypt(top)), top);
}

TEST(Paillier, EncryptionIsProbabilistic) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  Ciphertext a = pk.Encrypt(5);
  Ciphertext b = pk.Encrypt(5);
  EXPECT_NE(a.value, b.value);
  EXPECT_EQ(keys.paillier.private_key.Decrypt(a), 5);
  EXPECT_EQ(keys.paillier.private_key.Decrypt(b), 5);
}

TEST(Paillier, RangeAndTypeErrors) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  EXPECT_EQ(CodeOf([&] { pk.Encrypt(pk.n()); }), ErrorCode::kRange);
  EXPECT_EQ(CodeOf([&] { pk.Encrypt(-1); }), ErrorCode::kRange);
  Ciphertext dgk = keys.dgk.public_key.Encrypt(1);
  EXPECT_EQ(CodeOf([&] { keys.paillier.private_key.Decrypt(dgk); }),
            ErrorCode::kType);
  EXPECT_EQ(CodeOf([&] { pk.Add(pk.Encrypt(1), dgk); }), ErrorCode::kType);
  Ciphertext too_big{pk.n_squared(), Scheme::kPaillier};
  EXPECT_EQ(CodeOf([&] { pk.Add(pk.Encrypt(1), too_big); }), ErrorCode::kType);
}

TEST(Paillier, HomomorphicAdd) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  const auto& sk = keys.paillier.private_key;
  EXPECT_EQ(sk.Decrypt(pk.Add(pk.Encrypt(2), pk.Encrypt(3))), 5);
  mpz_class m = RandomBelow(pk.n());
  EXPECT_EQ(sk.Decrypt(pk.Add(pk.Encrypt(m), pk.Encrypt(0))), m);
  EXPECT_EQ(sk.Decrypt(pk.Add(pk.Encrypt(pk.n() - 1), pk.Encrypt(2))), 1);
  EXPECT_EQ(sk.Decrypt(pk.AddPlain(pk.Encrypt(40), 2)), 42);
}

TEST(Paillier, ScalarMul) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  const auto& sk = keys.paillier.private_key;
  EXPECT_EQ(sk.Decrypt(pk.ScalarMul(pk.Encrypt(3), 4)), 12);
  mpz_class m = RandomBelow(pk.n());
  EXPECT_EQ(sk.Decrypt(pk.ScalarMul(pk.Encrypt(m), 1)), m);
  EXPECT_EQ(sk.Decrypt(pk.ScalarMul(pk.Encrypt(5), 0)), 0);
}

TEST(Paillier, SignedEncoding) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  const auto& sk = keys.paillier.private_key;
  EXPECT_EQ(pk.EncodeSigned(-5), pk.n() - 5);
  EXPECT_EQ(pk.EncodeSigned(0), 0);
  EXPECT_EQ(pk.DecodeSigned(pk.n() - 5), -5);
  // x - T computed homomorphically.
  Ciphertext diff = pk.Add(pk.Encrypt(9), pk.Encrypt(pk.EncodeSigned(-5)));
  EXPECT_EQ(pk.DecodeSigned(sk.Decrypt(diff)), 4);
  Ciphertext neg = pk.Add(pk.Encrypt(5), pk.Encrypt(pk.EncodeSigned(-9)));
  EXPECT_EQ(pk.DecodeSigned(sk.Decrypt(neg)), -4);
  mpz_class half = pk.n() / 2;  // floor(N/2); 2*half = N - 1 < N
  EXPECT_EQ(pk.EncodeSigned(half), half);
  EXPECT_EQ(CodeOf([&] { pk.EncodeSigned(half + 1); }), ErrorCode::kRange);
  EXPECT_EQ(CodeOf([&] { pk.EncodeSigned(-(half + 1)); }), ErrorCode::kRange);
}

TEST(Paillier, RerandomizeKeepsPlaintext) {
  auto keys = TestKeys();
  const auto& pk = keys.paillier.public_key;
  Ciphertext c = pk.Encrypt(77);
  Ciphertext r = pk.Rerandomize(c);
  EXPECT_NE(c.value, r.value);
  EXPECT_EQ(keys.paillier.private_key.Decrypt(r), 77);
}

TEST(Dgk, ZeroCheck) {
  auto keys = TestKeys();
  const auto& pk = keys.dgk.public_key;
  const auto& sk = keys.dgk.private_key;
  EXPECT_EQ(pk.u(), 65537u);
  EXPECT_TRUE(sk.IsZero(pk.Encrypt(0)));
  EXPECT_FALSE(sk.IsZero(pk.Encrypt(7)));
  EXPECT_TRUE(sk.IsZero(pk.ScalarMul(pk.Encrypt(7), 0)));
  // u - 1 + 1 wraps to zero.
  EXPECT_TRUE(sk.IsZero(pk.AddPlain(pk.Encrypt(pk.u() - 1), 1)));
}

TEST(Dgk, RangeErrors) {
  auto keys = TestKeys();
  const auto& pk = keys.dgk.public_key;
  EXPECT_EQ(CodeOf([&] { pk.Encrypt(pk.u()); }), ErrorCode::kRange);
  EXPECT_EQ(CodeOf([&] { pk.ScalarMul(pk.Encrypt(1), pk.u()); }),
            ErrorCode::kRange);
  Ciphertext paillier = keys.paillier.public_key.Encrypt(0);
  EXPECT_EQ(CodeOf([&] { keys.dgk.private_key.IsZero(paillier); }),
            ErrorCode::kType);
}

TEST(Dgk, AdditionMatchesOracle) {
  auto keys = TestKeys();
  const auto& pk = keys.dgk.public_key;
  const auto& sk = keys.dgk.private_key;
  DgkDecryptOracle oracle(sk);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t a = RandomBelow(std::uint64_t{pk.u() / 2});
    std::uint64_t b = RandomBelow(std::uint64_t{pk.u() / 2});
    if (i == 0) a = b = 0;
    Ciphertext sum = pk.Add(pk.Encrypt(a), pk.Encrypt(b));
    EXPECT_EQ(sk.IsZero(sum), a == 0 && b == 0);
    EXPECT_EQ(oracle.Decrypt(sum), (a + b) % pk.u());
    std::uint64_t k = RandomBelow(std::uint64_t{pk.u()});
    EXPECT_EQ(oracle.Decrypt(pk.ScalarMul(pk.Encrypt(a), k)),
              (a * k) % pk.u());
  }
}

TEST(Dgk, ZeroCheckExhaustiveSmallRange) {
  auto keys = TestKeys();
  for (std::uint64_t m = 0; m < 1024; ++m) {
    EXPECT_EQ(keys.dgk.private_key.IsZero(keys.dgk.public_key.Encrypt(m)),
              m == 0)
        << "m=" << m;
  }
}

TEST(ProtocolParams, Validation) {
  ProtocolParams p = TestParams(4);
  EXPECT_NO_THROW(p.Validate());
  ProtocolParams bad = p;
  bad.kappa = 4;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kParameter);
  bad = p;
  bad.t = 1;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kParameter);
  bad = p;
  bad.dgk_plaintext_space = 65536;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kParameter);
  bad = p;
  bad.dgk_plaintext_space = 17;  // prime, but not > 3(t+2) = 18
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kParameter);
  bad = p;
  bad.paillier_bits = 768;
  EXPECT_EQ(CodeOf([&] { bad.Validate(); }), ErrorCode::kParameter);
}

TEST(KeyBlobs, FieldsAreLengthPrefixedBigEndian) {
  const mpz_class fields[] = {mpz_class(0x0102), mpz_class(0)};
  Bytes blob = EncodeFields(fields);
  EXPECT_EQ(blob, (Bytes{0, 0, 0, 2, 0x01, 0x02, 0, 0, 0, 0}));
  auto back = DecodeFields(blob, 2);
  EXPECT_EQ(back[0], 0x0102);
  EXPECT_EQ(back[1], 0);
  EXPECT_EQ(CodeOf([&] { DecodeFields(blob, 3); }), ErrorCode::kDecode);
  Bytes truncated(blob.begin(), blob.begin() + 5);
  EXPECT_EQ(CodeOf([&] { DecodeFields(truncated, 2); }), ErrorCode::kDecode);
  Bytes padded{0, 0, 0, 2, 0x00, 0x01};
  EXPECT_EQ(CodeOf([&] { DecodeFields(padded, 1); }), ErrorCode::kDecode);
}

TEST(KeyBlobs, PublicAndPrivateKeysSurviveSerialization) {
  auto keys = TestKeys();
  auto pk = ParsePaillierPublic(SerializePaillierPublic(keys.paillier.public_key));
  EXPECT_EQ(pk, keys.paillier.public_key);
  auto dpk = ParseDgkPublic(SerializeDgkPublic(keys.dgk.public_key));
  EXPECT_EQ(dpk, keys.dgk.public_key);

  ClientKeys back = ParseClientKeys(SerializeClientKeys(keys));
  EXPECT_EQ(back.Public(), keys.Public());
  Ciphertext c = keys.paillier.public_key.Encrypt(1234);
  EXPECT_EQ(back.paillier.private_key.Decrypt(c), 1234);
  EXPECT_TRUE(back.dgk.private_key.IsZero(keys.dgk.public_key.Encrypt(0)));
  EXPECT_EQ(keys.Public().Fingerprint(), back.Public().Fingerprint());
}

TEST(Bigint, Base64UrlCanonical) {
  Bytes data{0xfb, 0xff, 0x01};
  EXPECT_EQ(Base64UrlEncode(data), "-_8B");
  EXPECT_EQ(Base64UrlDecode("-_8B"), data);
  EXPECT_EQ(Base64UrlEncode(Bytes{0x61}), "YQ");
  EXPECT_EQ(Base64UrlDecode("YQ"), Bytes{0x61});
  EXPECT_EQ(CodeOf([] { Base64UrlDecode("YR"); }), ErrorCode::kDecode);
  EXPECT_EQ(CodeOf([] { Base64UrlDecode("Y"); }), ErrorCode::kDecode);
  EXPECT_EQ(CodeOf([] { Base64UrlDecode("YQ=="); }), ErrorCode::kDecode);
  for (int len = 0; len < 40; ++len) {
    Bytes b(len);
    FillRandom(b);
    EXPECT_EQ(Base64UrlDecode(Base64UrlEncode(b)), b);
  }
}

}  // namespace
}  // namespace ppdt::he
