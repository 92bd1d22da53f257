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

#ifndef PPDT_HE_DGK_HPP_
#define PPDT_HE_DGK_HPP_

#include <gmpxx.h>

#include <cstdint>

#include "ppdt/he/ciphertext.hpp"
#include "ppdt/he/params.hpp"

namespace ppdt::he {

// Bit length of the secret subgroup orders v_p, v_q.
inline constexpr int kDgkSubgroupBits = 160;

// DGK public key: Enc(m) = g^m h^r mod n with plaintexts in Z_u.
class DgkPublicKey {
 public:
  DgkPublicKey() = default;
  DgkPublicKey(mpz_class n, mpz_class g, mpz_class h, std::uint32_t u,
               int subgroup_bits = kDgkSubgroupBits);

  const mpz_class& n() const { return n_; }
  const mpz_class& g() const { return g_; }
  const mpz_class& h() const { return h_; }
  std::uint32_t u() const { return u_; }
  int subgroup_bits() const { return subgroup_bits_; }
  std::size_t bits() const;

  // m must lie in [0, u).
  Ciphertext Encrypt(std::uint64_t m) const;
  Ciphertext Add(const Ciphertext& a, const Ciphertext& b) const;
  // (m + k) mod u without fresh randomness; k in [0, u).
  Ciphertext AddPlain(const Ciphertext& c, std::uint64_t k) const;
  // (k * m) mod u; k in [0, u).
  Ciphertext ScalarMul(const Ciphertext& c, std::uint64_t k) const;
  Ciphertext Rerandomize(const Ciphertext& c) const;

  void CheckCiphertext(const Ciphertext& c) const;

  friend bool operator==(const DgkPublicKey& a, const DgkPublicKey& b) {
    return a.n_ == b.n_ && a.g_ == b.g_ && a.h_ == b.h_ && a.u_ == b.u_ &&
           a.subgroup_bits_ == b.subgroup_bits_;
  }

 private:
  mpz_class RandomMask() const;

  mpz_class n_, g_, h_;
  std::uint32_t u_ = 0;
  int subgroup_bits_ = kDgkSubgroupBits;
};

class DgkPrivateKey {
 public:
  DgkPrivateKey() = default;
  DgkPrivateKey(DgkPublicKey public_key, mpz_class p, mpz_class q,
                mpz_class vp, mpz_class vq);

  const DgkPublicKey& public_key() const { return public_key_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  const mpz_class& vp() const { return vp_; }
  const mpz_class& vq() const { return vq_; }

  // True iff the plaintext is 0 mod u: c^{v_p} == 1 (mod p).
  bool IsZero(const Ciphertext& c) const;

 private:
  DgkPublicKey public_key_;
  mpz_class p_, q_, vp_, vq_;
};

struct DgkKeypair {
  DgkPublicKey public_key;
  DgkPrivateKey private_key;
};

// Uses params.dgk_bits and params.dgk_plaintext_space.
DgkKeypair DgkKeygen(const ProtocolParams& params);

}  // namespace ppdt::he

#endif  // PPDT_HE_DGK_HPP_
