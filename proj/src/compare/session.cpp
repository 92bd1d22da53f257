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

#include "ppdt/compare/session.hpp"

#include <string>
#include <utility>

#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"

namespace ppdt::compare {

namespace {

using he::Ciphertext;
using he::DgkPublicKey;

mpz_class Pow2(int bits) {
  mpz_class v = 1;
  mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return v;
}

// Counting wrappers so that every DGK operation is tallied uniformly.
class CountingDgk {
 public:
  CountingDgk(const DgkPublicKey& pk, WorkCounters* counters)
      : pk_(pk), counters_(counters) {}

  Ciphertext Add(const Ciphertext& a, const Ciphertext& b) {
    Tick();
    return pk_.Add(a, b);
  }
  Ciphertext AddPlain(const Ciphertext& c, std::uint64_t k) {
    Tick();
    return pk_.AddPlain(c, k);
  }
  Ciphertext ScalarMul(const Ciphertext& c, std::uint64_t k) {
    Tick();
    return pk_.ScalarMul(c, k);
  }
  Ciphertext Rerandomize(const Ciphertext& c) {
    Tick();
    return pk_.Rerandomize(c);
  }
  // Uniform nonzero element of Z_u.
  std::uint64_t NonzeroScalar() const { return 1 + RandomBelow(std::uint64_t{pk_.u()} - 1); }
  std::uint64_t u() const { return pk_.u(); }

 private:
  void Tick() {
    if (counters_ != nullptr) ++counters_->dgk_hom_ops;
  }

  const DgkPublicKey& pk_;
  WorkCounters* counters_;
};

// Encryption of a_i XOR b_i = a_i * (1 - 2 b_i) + b_i, linear in [[a_i]].
Ciphertext XorWithPlainBit(CountingDgk& dgk, const Ciphertext& a,
                           std::uint64_t b_bit) {
  const std::uint64_t u = dgk.u();
  const std::uint64_t scalar = b_bit ? u - 1 : 1;
  return dgk.AddPlain(dgk.ScalarMul(a, scalar), b_bit);
}

// Masks a plaintext-bearing ciphertext with a random nonzero scalar and fresh
// randomness.
Ciphertext Mask(CountingDgk& dgk, const Ciphertext& c) {
  return dgk.Rerandomize(dgk.ScalarMul(c, dgk.NonzeroScalar()));
}

void Shuffle(std::vector<Ciphertext>& items) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(RandomBelow(std::uint64_t{i}));
    std::swap(items[i - 1], items[j]);
  }
}

void CheckBits(const DgkPublicKey& pk, std::span<const Ciphertext> bits,
               int t) {
  if (bits.size() != static_cast<std::size_t>(t) + 1) {
    throw Error(ErrorCode::kProtocol,
                "bit vector must hold exactly t+1 ciphertexts");
  }
  for (const Ciphertext& c : bits) pk.CheckCiphertext(c);
}

const Ciphertext kTrivialZero{mpz_class(1), he::Scheme::kDgk};

}  // namespace

SessionId NewSessionId() {
  SessionId id;
  FillRandom(id);
  return id;
}

std::string_view ModeName(CompareMode mode) {
  return mode == CompareMode::kNumeric ? "numeric" : "equality";
}

CompareMode ParseMode(std::string_view name) {
  if (name == "numeric") return CompareMode::kNumeric;
  if (name == "equality") return CompareMode::kEquality;
  throw Error(ErrorCode::kDecode, "unknown comparison mode: " + std::string(name));
}

SiteSecrets SampleSiteSecrets(const he::ProtocolParams& params) {
  SiteSecrets s;
  s.mu = RandomInRange(Pow2(params.t), Pow2(params.t + params.kappa));
  s.sigma = static_cast<int>(RandomBelow(std::uint64_t{2}));
  s.r_prime = RandomBits(static_cast<std::size_t>(params.tau)).get_ui();
  return s;
}

std::vector<Ciphertext> BuildNumericSequence(const DgkPublicKey& pk,
                                             std::span<const Ciphertext> bits,
                                             std::uint64_t b, int sigma, int t,
                                             WorkCounters* counters) {
  CheckBits(pk, bits, t);
  CountingDgk dgk(pk, counters);
  const std::uint64_t u = pk.u();
  // s = 1 - 2 sigma as an element of Z_u.
  const std::uint64_t s = sigma ? u - 1 : 1;

  std::vector<Ciphertext> items;
  items.reserve(static_cast<std::size_t>(t) + 2);
  // Running [[sum_{j>i} d_j]], starting from a trivial encryption of zero.
  Ciphertext higher = kTrivialZero;
  for (int i = t - 1; i >= 0; --i) {
    const std::uint64_t b_i = (b >> i) & 1;
    // s (a_i - b_i) + 1 + 3 sum_{j>i} d_j
    const std::uint64_t constant = (1 + u - (s * b_i) % u) % u;
    Ciphertext item = dgk.AddPlain(dgk.ScalarMul(bits[i], s), constant);
    item = dgk.Add(item, dgk.ScalarMul(higher, 3));
    items.push_back(Mask(dgk, item));
    higher = dgk.Add(higher, XorWithPlainBit(dgk, bits[i], b_i));
  }
  // Equality slot when sigma = 1 (zero iff a == b), nonzero dummy otherwise.
  items.push_back(Mask(dgk, dgk.AddPlain(higher, sigma ? 0 : 1)));
  items.push_back(Mask(dgk, dgk.AddPlain(higher, static_cast<std::uint64_t>(t) + 2)));
  Shuffle(items);
  return items;
}

std::vector<Ciphertext> BuildEqualitySequence(const DgkPublicKey& pk,
                                              std::span<const Ciphertext> bits,
                                              std::uint64_t b, int sigma, int t,
                                              WorkCounters* counters) {
  CheckBits(pk, bits, t);
  CountingDgk dgk(pk, counters);
  const std::uint64_t u = pk.u();
  Ciphertext distance = kTrivialZero;
  for (int i = 0; i <= t; ++i) {
    distance = dgk.Add(distance, XorWithPlainBit(dgk, bits[i], (b >> i) & 1));
  }
  // sigma = 0: offsets 0, 1, ..., t+1   (zero iff c == 0)
  // sigma = 1: offsets -1, ..., -(t+1), t+2   (zero iff 1 <= c <= t+1)
  std::vector<Ciphertext> items;
  items.reserve(static_cast<std::size_t>(t) + 2);
  for (int k = 0; k <= t + 1; ++k) {
    const std::uint64_t kk = static_cast<std::uint64_t>(k);
    const std::uint64_t forward = kk;
    const std::uint64_t backward =
        k <= t ? u - (kk + 1) : static_cast<std::uint64_t>(t) + 2;
    items.push_back(Mask(dgk, dgk.AddPlain(distance, sigma ? backward : forward)));
  }
  Shuffle(items);
  return items;
}

SiteComparison::SiteComparison(SessionId session, CompareMode mode,
                               he::KeyMaterial keys, SiteSecrets secrets)
    : session_(session),
      mode_(mode),
      keys_(std::move(keys)),
      secrets_(std::move(secrets)) {}

std::pair<SiteComparison, BlindedValueMsg> SiteComparison::Begin(
    const SessionId& session, const he::Ciphertext& enc_x,
    const he::Ciphertext& enc_neg_threshold, CompareMode mode,
    const he::KeyMaterial& keys, std::optional<SiteSecrets> secrets) {
  const he::ProtocolParams& params = keys.params;
  params.ValidateAgainst(keys.paillier, keys.dgk);
  SiteSecrets s = secrets ? std::move(*secrets) : SampleSiteSecrets(params);
  if (s.mu < 0 || s.mu >= Pow2(params.t + params.kappa) ||
      (s.sigma != 0 && s.sigma != 1) ||
      (params.tau < 64 && (s.r_prime >> params.tau) != 0)) {
    throw Error(ErrorCode::kParameter, "site secrets out of range");
  }

  SiteComparison site(session, mode, keys, std::move(s));
  const he::PaillierPublicKey& pk = site.keys_.paillier;
  mpz_class offset = site.secrets_.mu;
  if (mode == CompareMode::kNumeric) offset += Pow2(params.t);
  he::Ciphertext m = pk.Add(pk.Add(enc_x, enc_neg_threshold), pk.Encrypt(offset));
  site.counters_.paillier_encryptions += 1;
  site.counters_.paillier_hom_ops += 2;
  return {std::move(site), BlindedValueMsg{session, std::move(m), mode}};
}

void SiteComparison::Fail(const char* what) {
  step_ = Step::kAborted;
  throw Error(ErrorCode::kProtocol, std::string("site comparison: ") + what);
}

MaskedSequenceMsg SiteComparison::OnBitVector(const BitVectorMsg& msg) {
  if (step_ != Step::kAwaitBitVector) Fail("bit vector out of phase");
  if (msg.session != session_) Fail("session id mismatch");
  const int t = keys_.params.t;
  counters_.dgk_received += msg.bits.size();
  std::vector<he::Ciphertext> items;
  try {
    if (mode_ == CompareMode::kNumeric) {
      const std::uint64_t b = mpz_class(secrets_.mu % Pow2(t)).get_ui();
      items = BuildNumericSequence(keys_.dgk, msg.bits, b, secrets_.sigma, t,
                                   &counters_);
    } else {
      const std::uint64_t b = mpz_class(secrets_.mu % Pow2(t + 1)).get_ui();
      items = BuildEqualitySequence(keys_.dgk, msg.bits, b, secrets_.sigma, t,
                                    &counters_);
    }
  } catch (const Error& e) {
    step_ = Step::kAborted;
    throw Error(ErrorCode::kProtocol, std::string("site comparison: ") + e.what());
  }
  counters_.dgk_sent += items.size();
  step_ = Step::kSequenceSent;
  return {session_, std::move(items)};
}

int SiteComparison::ShareBit() const {
  // numeric: beta = p_c ^ floor(mu / 2^t) mod 2 ^ borrow, and
  // borrow = delta' ^ sigma. The site folds its two known terms together.
  const int t = keys_.params.t;
  const int mu_parity = mpz_tstbit(secrets_.mu.get_mpz_t(), static_cast<mp_bitcnt_t>(t));
  const int numeric_mask = mode_ == CompareMode::kNumeric ? 1 : 0;
  return (mu_parity & numeric_mask) ^ secrets_.sigma;
}

ShareVMsg SiteComparison::RevealShare() {
  if (step_ != Step::kSequenceSent) Fail("share reveal out of phase");
  const int tau = keys_.params.tau;
  const std::uint64_t mask = tau >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << tau) - 1;
  v_ = (static_cast<std::uint64_t>(ShareBit()) + secrets_.r_prime) & mask;
  step_ = Step::kShareRevealed;
  return {session_, v_};
}

int SiteComparison::Finish(const ShareWMsg& msg) {
  if (step_ != Step::kShareRevealed) Fail("share reply out of phase");
  if (msg.session != session_) Fail("session id mismatch");
  // The client may only flip the least significant bit.
  if ((msg.w >> 1) != (v_ >> 1)) Fail("malformed share reply");
  step_ = Step::kDone;
  return static_cast<int>((msg.w ^ v_) & 1) ^ ShareBit();
}

void ClientComparison::Fail(const char* what) {
  step_ = Step::kAborted;
  throw Error(ErrorCode::kProtocol, std::string("client comparison: ") + what);
}

void ClientComparison::CheckSession(const SessionId& id) {
  if (id != session_) Fail("session id mismatch");
}

BitVectorMsg ClientComparison::OnBlindedValue(const BlindedValueMsg& msg) {
  if (step_ != Step::kAwaitBlinded) Fail("blinded value out of phase");
  session_ = msg.session;
  mode_ = msg.mode;
  const he::ProtocolParams& params = keys_->params;
  const int t = params.t;
  try {
    m_ = keys_->paillier.private_key.Decrypt(msg.blinded);
  } catch (const Error&) {
    Fail("cannot decrypt blinded value");
  }
  ++counters_.paillier_decryptions;
  // M < 2^(t+1) + 2^(t+kappa); anything larger means a wrong key or a
  // corrupted value.
  if (BitLength(m_) > static_cast<std::size_t>(t + params.kappa + 1)) {
    Fail("blinded value out of range");
  }
  parity_ = mpz_tstbit(m_.get_mpz_t(), static_cast<mp_bitcnt_t>(t));
  BitVectorMsg out{session_, {}};
  out.bits.reserve(static_cast<std::size_t>(t) + 1);
  for (int i = 0; i <= t; ++i) {
    out.bits.push_back(keys_->dgk.public_key.Encrypt(
        static_cast<std::uint64_t>(mpz_tstbit(m_.get_mpz_t(), static_cast<mp_bitcnt_t>(i)))));
  }
  counters_.dgk_encryptions += out.bits.size();
  counters_.dgk_sent += out.bits.size();
  step_ = Step::kAwaitSequence;
  return out;
}

void ClientComparison::OnMaskedSequence(const MaskedSequenceMsg& msg) {
  if (step_ != Step::kAwaitSequence) Fail("masked sequence out of phase");
  CheckSession(msg.session);
  if (msg.items.size() != static_cast<std::size_t>(keys_->params.t) + 2) {
    Fail("masked sequence must hold exactly t+2 ciphertexts");
  }
  counters_.dgk_received += msg.items.size();
  int found = 0;
  try {
    // No early exit: every item is checked.
    for (const he::Ciphertext& item : msg.items) {
      found |= keys_->dgk.private_key.IsZero(item) ? 1 : 0;
      ++counters_.zero_checks;
    }
  } catch (const Error&) {
    Fail("malformed masked sequence");
  }
  delta_ = found;
  step_ = Step::kAwaitShare;
}

ShareWMsg ClientComparison::OnShareV(const ShareVMsg& msg) {
  if (step_ != Step::kAwaitShare) Fail("share out of phase");
  CheckSession(msg.session);
  const int numeric_mask = mode_ == CompareMode::kNumeric ? 1 : 0;
  const std::uint64_t share = static_cast<std::uint64_t>((parity_ & numeric_mask) ^ delta_);
  step_ = Step::kDone;
  return {session_, msg.v ^ share};
}

LocalOutcome RunLocalComparison(const he::ClientKeys& keys, std::uint64_t x,
                                std::uint64_t threshold, CompareMode mode,
                                std::optional<SiteSecrets> secrets) {
  const he::KeyMaterial material = keys.Public();
  const he::PaillierPublicKey& pk = material.paillier;
  const he::Ciphertext enc_x = pk.Encrypt(mpz_class(static_cast<unsigned long>(x)));
  const he::Ciphertext enc_neg_t = pk.Encrypt(
      pk.EncodeSigned(-mpz_class(static_cast<unsigned long>(threshold))));
  const SessionId id = NewSessionId();

  auto [site, blinded] = SiteComparison::Begin(id, enc_x, enc_neg_t, mode,
                                               material, std::move(secrets));
  ClientComparison client(keys);
  BitVectorMsg bits = client.OnBlindedValue(blinded);
  MaskedSequenceMsg sequence = site.OnBitVector(bits);
  client.OnMaskedSequence(sequence);
  ShareWMsg w = client.OnShareV(site.RevealShare());
  const int beta = site.Finish(w);
  return {beta, site.delta_site(), client.delta_client(),
          client.blinded_plaintext(), site.counters(), client.counters()};
}

}  // namespace ppdt::compare
