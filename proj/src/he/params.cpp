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

#include "ppdt/he/params.hpp"

#include <gmpxx.h>

#include <string>

#include "ppdt/errors.hpp"
#include "ppdt/he/dgk.hpp"
#include "ppdt/he/paillier.hpp"

namespace ppdt::he {

bool IsSupportedKeySize(int bits) {
  return bits == 512 || bits == 1024 || bits == 2048 || bits == 3072;
}

void ProtocolParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kParameter, "protocol params: " + what);
  };
  if (t < 2) fail("t must be at least 2");
  // Attribute values and thresholds travel as uint64 with one spare bit.
  if (t > 62) fail("t must be at most 62");
  if (kappa < 8) fail("kappa must be at least 8");
  if (tau < 1 || tau > 63) fail("tau must be in [1, 63]");
  if (!IsSupportedKeySize(paillier_bits)) fail("unsupported paillier_bits");
  if (!IsSupportedKeySize(dgk_bits)) fail("unsupported dgk_bits");
  mpz_class u = dgk_plaintext_space;
  if (mpz_probab_prime_p(u.get_mpz_t(), 30) == 0) {
    fail("dgk_plaintext_space must be prime");
  }
  if (u <= 3 * (t + 2)) fail("dgk_plaintext_space must exceed 3(t+2)");
  // 2^(t+kappa+2) must fit below the Paillier modulus.
  if (t + kappa + 2 >= paillier_bits - 1) fail("t + kappa too large for N");
}

void ProtocolParams::ValidateAgainst(const PaillierPublicKey& paillier,
                                     const DgkPublicKey& dgk) const {
  Validate();
  auto near = [](std::size_t actual, int wanted) {
    return actual + 1 >= static_cast<std::size_t>(wanted) &&
           actual <= static_cast<std::size_t>(wanted) + 1;
  };
  if (!near(paillier.bits(), paillier_bits) || !near(dgk.bits(), dgk_bits)) {
    throw Error(ErrorCode::kParameter,
                "protocol params: key sizes differ from params");
  }
  mpz_class bound = 1;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), t + kappa + 2);
  if (bound >= paillier.n()) {
    throw Error(ErrorCode::kParameter,
                "protocol params: 2^(t+kappa+2) does not fit below N");
  }
  if (dgk.u() != dgk_plaintext_space) {
    throw Error(ErrorCode::kParameter,
                "protocol params: DGK key plaintext space differs from params");
  }
}

ProtocolParams TestParams(int t) {
  ProtocolParams params;
  params.t = t;
  params.paillier_bits = 512;
  params.dgk_bits = 512;
  return params;
}

}  // namespace ppdt::he
