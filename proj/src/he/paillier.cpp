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

#include "ppdt/he/paillier.hpp"

#include <string>
#include <utility>

#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"
#include "ppdt/he/params.hpp"

namespace ppdt::he {

namespace {

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

// Exponent is secret: use GMP's side-channel silent variant.
mpz_class PowModSecret(const mpz_class& base, const mpz_class& exp,
                       const mpz_class& mod) {
  mpz_class out;
  mpz_powm_sec(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
               mod.get_mpz_t());
  return out;
}

mpz_class Invert(const mpz_class& a, const mpz_class& mod) {
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0) {
    throw Error(ErrorCode::kParameter, "paillier: value not invertible");
  }
  return out;
}

}  // namespace

PaillierPublicKey::PaillierPublicKey(mpz_class n)
    : n_(std::move(n)), n_squared_(n_ * n_) {
  if (n_ <= 3 || mpz_even_p(n_.get_mpz_t())) {
    throw Error(ErrorCode::kParameter, "paillier: modulus must be odd and > 3");
  }
}

std::size_t PaillierPublicKey::bits() const { return BitLength(n_); }

void PaillierPublicKey::CheckCiphertext(const Ciphertext& c) const {
  if (c.scheme != Scheme::kPaillier) {
    throw Error(ErrorCode::kType, "expected a paillier ciphertext");
  }
  if (c.value <= 0 || c.value >= n_squared_) {
    throw Error(ErrorCode::kType, "paillier ciphertext out of range for key");
  }
}

Ciphertext PaillierPublicKey::Encrypt(const mpz_class& m) const {
  if (m < 0 || m >= n_) {
    throw Error(ErrorCode::kRange, "paillier: plaintext outside [0, N)");
  }
  // (1 + mN) * r^N mod N^2
  mpz_class c = (1 + m * n_) % n_squared_;
  c = (c * PowMod(RandomUnit(n_), n_, n_squared_)) % n_squared_;
  return {std::move(c), Scheme::kPaillier};
}

Ciphertext PaillierPublicKey::Add(const Ciphertext& a,
                                  const Ciphertext& b) const {
  CheckCiphertext(a);
  CheckCiphertext(b);
  return {mpz_class((a.value * b.value) % n_squared_), Scheme::kPaillier};
}

Ciphertext PaillierPublicKey::AddPlain(const Ciphertext& c,
                                       const mpz_class& k) const {
  CheckCiphertext(c);
  if (k < 0 || k >= n_) {
    throw Error(ErrorCode::kRange, "paillier: constant outside [0, N)");
  }
  mpz_class shift = (1 + k * n_) % n_squared_;
  return {mpz_class((c.value * shift) % n_squared_), Scheme::kPaillier};
}

Ciphertext PaillierPublicKey::ScalarMul(const Ciphertext& c,
                                        const mpz_class& k) const {
  CheckCiphertext(c);
  if (k < 0 || k >= n_) {
    throw Error(ErrorCode::kRange, "paillier: scalar outside [0, N)");
  }
  return {PowMod(c.value, k, n_squared_), Scheme::kPaillier};
}

Ciphertext PaillierPublicKey::Rerandomize(const Ciphertext& c) const {
  CheckCiphertext(c);
  mpz_class mask = PowMod(RandomUnit(n_), n_, n_squared_);
  return {mpz_class((c.value * mask) % n_squared_), Scheme::kPaillier};
}

mpz_class PaillierPublicKey::EncodeSigned(const mpz_class& v) const {
  mpz_class magnitude = abs(v);
  if (2 * magnitude >= n_) {
    throw Error(ErrorCode::kRange, "paillier: |v| >= N/2");
  }
  return v >= 0 ? v : mpz_class(n_ - magnitude);
}

mpz_class PaillierPublicKey::DecodeSigned(const mpz_class& m) const {
  if (m < 0 || m >= n_) {
    throw Error(ErrorCode::kRange, "paillier: encoded value outside [0, N)");
  }
  return 2 * m < n_ ? m : mpz_class(m - n_);
}

PaillierPrivateKey::PaillierPrivateKey(mpz_class p, mpz_class q)
    : public_key_(p * q), p_(std::move(p)), q_(std::move(q)) {
  if (p_ == q_) throw Error(ErrorCode::kParameter, "paillier: p == q");
  p_squared_ = p_ * p_;
  q_squared_ = q_ * q_;
  const mpz_class g = public_key_.n() + 1;
  // h_p = L_p(g^(p-1) mod p^2)^-1 mod p, likewise for q.
  mpz_class lp = (PowMod(g, p_ - 1, p_squared_) - 1) / p_;
  mpz_class lq = (PowMod(g, q_ - 1, q_squared_) - 1) / q_;
  hp_ = Invert(lp, p_);
  hq_ = Invert(lq, q_);
  q_inv_p_ = Invert(q_, p_);
}

mpz_class PaillierPrivateKey::Decrypt(const Ciphertext& c) const {
  public_key_.CheckCiphertext(c);
  mpz_class mp = (PowModSecret(c.value % p_squared_, p_ - 1, p_squared_) - 1) /
                 p_ * hp_ % p_;
  mpz_class mq = (PowModSecret(c.value % q_squared_, q_ - 1, q_squared_) - 1) /
                 q_ * hq_ % q_;
  // CRT recombination.
  mpz_class diff = (mp - mq) % p_;
  if (diff < 0) diff += p_;
  mpz_class m = mq + q_ * ((diff * q_inv_p_) % p_);
  return m;
}

PaillierKeypair PaillierKeygen(int bits) {
  if (!IsSupportedKeySize(bits)) {
    throw Error(ErrorCode::kParameter,
                "paillier: unsupported key size " + std::to_string(bits));
  }
  const std::size_t half = static_cast<std::size_t>(bits) / 2;
  mpz_class p = RandomPrime(half);
  mpz_class q;
  do {
    q = RandomPrime(half);
  } while (q == p);
  PaillierPrivateKey sk(std::move(p), std::move(q));
  PaillierPublicKey pk = sk.public_key();
  return {std::move(pk), std::move(sk)};
}

}  // namespace ppdt::he
