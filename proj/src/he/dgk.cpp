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

#include "ppdt/he/dgk.hpp"

#include <string>
#include <utility>

#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"

namespace ppdt::he {

namespace {

mpz_class PowMod(const mpz_class& base, const mpz_class& exp,
                 const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

bool IsProbablePrime(const mpz_class& v) {
  return mpz_probab_prime_p(v.get_mpz_t(), 30) != 0;
}

// Prime of exactly `bits` bits of the form 2 * factor * r + 1.
mpz_class PrimeWithFactor(const mpz_class& factor, std::size_t bits) {
  const mpz_class base = 2 * factor;
  const std::size_t base_bits = BitLength(base);
  if (bits < base_bits + 8) {
    throw Error(ErrorCode::kParameter, "dgk: modulus too small for subgroup");
  }
  const std::size_t r_bits = bits - base_bits;
  for (;;) {
    mpz_class r = RandomBits(r_bits);
    mpz_setbit(r.get_mpz_t(), r_bits - 1);
    mpz_class p = base * r + 1;
    if (BitLength(p) == bits && IsProbablePrime(p)) return p;
  }
}

// Element of Z_p^* whose order is exactly u * v (u, v distinct primes).
mpz_class ElementOfOrder(const mpz_class& p, const mpz_class& u,
                         const mpz_class& v) {
  const mpz_class cofactor = (p - 1) / (u * v);
  for (;;) {
    mpz_class x = RandomInRange(2, p - 1);
    mpz_class e = PowMod(x, cofactor, p);
    if (PowMod(e, v, p) != 1 && PowMod(e, u, p) != 1) return e;
  }
}

mpz_class ElementOfPrimeOrder(const mpz_class& p, const mpz_class& v) {
  const mpz_class cofactor = (p - 1) / v;
  for (;;) {
    mpz_class x = RandomInRange(2, p - 1);
    mpz_class e = PowMod(x, cofactor, p);
    if (e != 1) return e;
  }
}

mpz_class Crt(const mpz_class& ap, const mpz_class& p, const mpz_class& aq,
              const mpz_class& q) {
  mpz_class q_inv;
  mpz_invert(q_inv.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_class diff = (ap - aq) % p;
  if (diff < 0) diff += p;
  return aq + q * ((diff * q_inv) % p);
}

}  // namespace

DgkPublicKey::DgkPublicKey(mpz_class n, mpz_class g, mpz_class h,
                           std::uint32_t u, int subgroup_bits)
    : n_(std::move(n)),
      g_(std::move(g)),
      h_(std::move(h)),
      u_(u),
      subgroup_bits_(subgroup_bits) {
  if (n_ <= 3 || g_ <= 1 || g_ >= n_ || h_ <= 1 || h_ >= n_ || u_ < 3 ||
      subgroup_bits_ < 16) {
    throw Error(ErrorCode::kParameter, "dgk: malformed public key");
  }
}

std::size_t DgkPublicKey::bits() const { return BitLength(n_); }

mpz_class DgkPublicKey::RandomMask() const {
  // 2.5x the subgroup size, the usual DGK choice.
  const std::size_t r_bits = static_cast<std::size_t>(subgroup_bits_) * 5 / 2;
  return PowMod(h_, RandomBits(r_bits), n_);
}

void DgkPublicKey::CheckCiphertext(const Ciphertext& c) const {
  if (c.scheme != Scheme::kDgk) {
    throw Error(ErrorCode::kType, "expected a dgk ciphertext");
  }
  if (c.value <= 0 || c.value >= n_) {
    throw Error(ErrorCode::kType, "dgk ciphertext out of range for key");
  }
}

Ciphertext DgkPublicKey::Encrypt(std::uint64_t m) const {
  if (m >= u_) throw Error(ErrorCode::kRange, "dgk: plaintext >= u");
  mpz_class c = PowMod(g_, mpz_class(static_cast<unsigned long>(m)), n_);
  c = (c * RandomMask()) % n_;
  return {std::move(c), Scheme::kDgk};
}

Ciphertext DgkPublicKey::Add(const Ciphertext& a, const Ciphertext& b) const {
  CheckCiphertext(a);
  CheckCiphertext(b);
  return {mpz_class((a.value * b.value) % n_), Scheme::kDgk};
}

Ciphertext DgkPublicKey::AddPlain(const Ciphertext& c, std::uint64_t k) const {
  CheckCiphertext(c);
  if (k >= u_) throw Error(ErrorCode::kRange, "dgk: constant >= u");
  mpz_class shift = PowMod(g_, mpz_class(static_cast<unsigned long>(k)), n_);
  return {mpz_class((c.value * shift) % n_), Scheme::kDgk};
}

Ciphertext DgkPublicKey::ScalarMul(const Ciphertext& c,
                                   std::uint64_t k) const {
  CheckCiphertext(c);
  if (k >= u_) throw Error(ErrorCode::kRange, "dgk: scalar >= u");
  return {PowMod(c.value, mpz_class(static_cast<unsigned long>(k)), n_),
          Scheme::kDgk};
}

Ciphertext DgkPublicKey::Rerandomize(const Ciphertext& c) const {
  CheckCiphertext(c);
  return {mpz_class((c.value * RandomMask()) % n_), Scheme::kDgk};
}

DgkPrivateKey::DgkPrivateKey(DgkPublicKey public_key, mpz_class p,
                             mpz_class q, mpz_class vp, mpz_class vq)
    : public_key_(std::move(public_key)),
      p_(std::move(p)),
      q_(std::move(q)),
      vp_(std::move(vp)),
      vq_(std::move(vq)) {
  if (p_ * q_ != public_key_.n()) {
    throw Error(ErrorCode::kParameter, "dgk: factors do not match modulus");
  }
}

bool DgkPrivateKey::IsZero(const Ciphertext& c) const {
  public_key_.CheckCiphertext(c);
  mpz_class reduced = c.value % p_;
  mpz_class out;
  mpz_powm_sec(out.get_mpz_t(), reduced.get_mpz_t(), vp_.get_mpz_t(),
               p_.get_mpz_t());
  return out == 1;
}

DgkKeypair DgkKeygen(const ProtocolParams& params) {
  if (!IsSupportedKeySize(params.dgk_bits)) {
    throw Error(ErrorCode::kParameter,
                "dgk: unsupported key size " + std::to_string(params.dgk_bits));
  }
  const mpz_class u = params.dgk_plaintext_space;
  if (!IsProbablePrime(u)) {
    throw Error(ErrorCode::kParameter, "dgk: plaintext space must be prime");
  }
  const std::size_t half = static_cast<std::size_t>(params.dgk_bits) / 2;
  mpz_class vp = RandomPrime(kDgkSubgroupBits);
  mpz_class vq;
  do {
    vq = RandomPrime(kDgkSubgroupBits);
  } while (vq == vp);
  mpz_class p = PrimeWithFactor(u * vp, half);
  mpz_class q;
  do {
    q = PrimeWithFactor(u * vq, half);
  } while (q == p);

  mpz_class g = Crt(ElementOfOrder(p, u, vp), p, ElementOfOrder(q, u, vq), q);
  mpz_class h =
      Crt(ElementOfPrimeOrder(p, vp), p, ElementOfPrimeOrder(q, vq), q);
  DgkPublicKey pk(p * q, std::move(g), std::move(h),
                  params.dgk_plaintext_space, kDgkSubgroupBits);
  DgkPrivateKey sk(pk, std::move(p), std::move(q), std::move(vp),
                   std::move(vq));
  return {std::move(pk), std::move(sk)};
}

}  // namespace ppdt::he
