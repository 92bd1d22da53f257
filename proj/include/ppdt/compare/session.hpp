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

#ifndef PPDT_COMPARE_SESSION_HPP_
#define PPDT_COMPARE_SESSION_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ppdt/compare/messages.hpp"
#include "ppdt/he/ciphertext.hpp"
#include "ppdt/he/dgk.hpp"
#include "ppdt/he/keys.hpp"

namespace ppdt::compare {

// Instrumentation for the constant-work property. Every cryptographic
// operation a session performs is tallied here.
struct WorkCounters {
  std::uint64_t paillier_encryptions = 0;
  std::uint64_t paillier_hom_ops = 0;
  std::uint64_t paillier_decryptions = 0;
  std::uint64_t dgk_encryptions = 0;
  std::uint64_t dgk_hom_ops = 0;
  std::uint64_t zero_checks = 0;
  std::uint64_t dgk_sent = 0;
  std::uint64_t dgk_received = 0;

  friend bool operator==(const WorkCounters&, const WorkCounters&) = default;
};

// Per-session secrets of the level-site. mu is the additive mask, sigma the
// direction bit, r_prime the share blinder.
struct SiteSecrets {
  mpz_class mu;
  int sigma = 0;
  std::uint64_t r_prime = 0;
};

// mu uniform in [2^t, 2^(t+kappa)), sigma a fair bit, r_prime uniform tau bits.
SiteSecrets SampleSiteSecrets(const he::ProtocolParams& params);

// DGK sub-protocol for 1{a < b} over the low t bits, with direction bit sigma.
// `bits` holds t+1 encrypted bits of a (bit t unused here); b is plaintext.
// Returns t+2 shuffled items; one of them is an encryption of zero iff
// (sigma == 0 and a < b) or (sigma == 1 and b <= a).
std::vector<he::Ciphertext> BuildNumericSequence(
    const he::DgkPublicKey& pk, std::span<const he::Ciphertext> bits,
    std::uint64_t b, int sigma, int t, WorkCounters* counters = nullptr);

// Equality variant over all t+1 bits: with c = popcount(a XOR b), one item is
// zero iff (sigma == 0 and c == 0) or (sigma == 1 and c != 0).
std::vector<he::Ciphertext> BuildEqualitySequence(
    const he::DgkPublicKey& pk, std::span<const he::Ciphertext> bits,
    std::uint64_t b, int sigma, int t, WorkCounters* counters = nullptr);

// Level-site half of one comparison. Fixed message schedule:
//   Begin -> [[M]];  BitVector -> MaskedSequence;  RevealShare -> v;
//   Finish(w) -> beta.
// Any call out of order aborts the session and throws Error(kProtocol).
class SiteComparison {
 public:
  enum class Step { kAwaitBitVector, kSequenceSent, kShareRevealed, kDone, kAborted };

  // numeric:  [[M]] = [[x]] + [[-T]] + [[2^t + mu]]
  // equality: [[M]] = [[x]] + [[-T]] + [[mu]]
  static std::pair<SiteComparison, BlindedValueMsg> Begin(
      const SessionId& session, const he::Ciphertext& enc_x,
      const he::Ciphertext& enc_neg_threshold, CompareMode mode,
      const he::KeyMaterial& keys,
      std::optional<SiteSecrets> secrets = std::nullopt);

  MaskedSequenceMsg OnBitVector(const BitVectorMsg& msg);
  ShareVMsg RevealShare();
  // Returns beta: 1{T <= x} (numeric) or 1{T == x} (equality).
  int Finish(const ShareWMsg& msg);

  void Abort() { step_ = Step::kAborted; }

  Step step() const { return step_; }
  CompareMode mode() const { return mode_; }
  const SessionId& session() const { return session_; }
  const WorkCounters& counters() const { return counters_; }
  // The site's DGK share delta_l (= sigma).
  int delta_site() const { return secrets_.sigma; }

 private:
  SiteComparison(SessionId session, CompareMode mode, he::KeyMaterial keys,
                 SiteSecrets secrets);

  [[noreturn]] void Fail(const char* what);
  int ShareBit() const;

  SessionId session_;
  CompareMode mode_;
  he::KeyMaterial keys_;
  SiteSecrets secrets_;
  std::uint64_t v_ = 0;
  Step step_ = Step::kAwaitBitVector;
  WorkCounters counters_;
};

// Client half. Holds a reference to the client's keys, which must outlive it.
class ClientComparison {
 public:
  enum class Step { kAwaitBlinded, kAwaitSequence, kAwaitShare, kDone, kAborted };

  explicit ClientComparison(const he::ClientKeys& keys) : keys_(&keys) {}

  BitVectorMsg OnBlindedValue(const BlindedValueMsg& msg);
  // Scans every item; records delta' = 1 iff some item decrypts to zero.
  void OnMaskedSequence(const MaskedSequenceMsg& msg);
  ShareWMsg OnShareV(const ShareVMsg& msg);

  void Abort() { step_ = Step::kAborted; }

  Step step() const { return step_; }
  const SessionId& session() const { return session_; }
  const WorkCounters& counters() const { return counters_; }
  const mpz_class& blinded_plaintext() const { return m_; }
  int delta_client() const { return delta_; }

 private:
  [[noreturn]] void Fail(const char* what);
  void CheckSession(const SessionId& id);

  const he::ClientKeys* keys_;
  SessionId session_{};
  CompareMode mode_ = CompareMode::kNumeric;
  mpz_class m_;
  int parity_ = 0;
  int delta_ = 0;
  Step step_ = Step::kAwaitBlinded;
  WorkCounters counters_;
};

struct LocalOutcome {
  int beta = 0;
  int delta_site = 0;
  int delta_client = 0;
  mpz_class blinded_plaintext;
  WorkCounters site_counters;
  WorkCounters client_counters;
};

// Runs one complete comparison with both halves in this process, x and the
// threshold encrypted under the client's key. Used by the protocol self-test.
LocalOutcome RunLocalComparison(const he::ClientKeys& keys, std::uint64_t x,
                                std::uint64_t threshold, CompareMode mode,
                                std::optional<SiteSecrets> secrets = std::nullopt);

}  // namespace ppdt::compare

#endif  // PPDT_COMPARE_SESSION_HPP_
