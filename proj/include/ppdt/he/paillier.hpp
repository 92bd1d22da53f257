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

#ifndef PPDT_HE_PAILLIER_HPP_
#define PPDT_HE_PAILLIER_HPP_

#include <gmpxx.h>

#include <cstdint>

#include "ppdt/he/ciphertext.hpp"

namespace ppdt::he {

// Paillier public key with generator g = N + 1.
class PaillierPublicKey {
 public:
  PaillierPublicKey() = default;
  explicit PaillierPublicKey(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& n_squared() const { return n_squared_; }
  std::size_t bits() const;

  // m must lie in [0, N).
  Ciphertext Encrypt(const mpz_class& m) const;
  // (m1 + m2) mod N.
  Ciphertext Add(const Ciphertext& a, const Ciphertext& b) const;
  // (m + k) mod N without fresh randomness; k in [0, N).
  Ciphertext AddPlain(const Ciphertext& c, const mpz_class& k) const;
  // (k * m) mod N; k in [0, N).
  Ciphertext ScalarMul(const Ciphertext& c, const mpz_class& k) const;
  // Same plaintext, fresh randomness.
  Ciphertext Rerandomize(const Ciphertext& c) const;

  // Signed values use the N/2 midpoint: v >= 0 maps to v, v < 0 to N - |v|.
  mpz_class EncodeSigned(const mpz_class& v) const;
  mpz_class DecodeSigned(const mpz_class& m) const;

  // Throws Error(kType) unless c is a Paillier ciphertext in range for this key.
  void CheckCiphertext(const Ciphertext& c) const;

  friend bool operator==(const PaillierPublicKey& a,
                         const PaillierPublicKey& b) {
    return a.n_ == b.n_;
  }

 private:
  mpz_class n_;
  mpz_class n_squared_;
};

class PaillierPrivateKey {
 public:
  PaillierPrivateKey() = default;
  PaillierPrivateKey(mpz_class p, mpz_class q);

  const PaillierPublicKey& public_key() const { return public_key_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }

  mpz_class Decrypt(const Ciphertext& c) const;

 private:
  PaillierPublicKey public_key_;
  mpz_class p_, q_;
  mpz_class p_squared_, q_squared_;
  mpz_class hp_, hq_;
  mpz_class q_inv_p_;
};

struct PaillierKeypair {
  PaillierPublicKey public_key;
  PaillierPrivateKey private_key;
};

// bits must be one of 512, 1024, 2048, 3072.
PaillierKeypair PaillierKeygen(int bits);

}  // namespace ppdt::he

#endif  // PPDT_HE_PAILLIER_HPP_
