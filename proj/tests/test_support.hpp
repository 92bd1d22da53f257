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

// Shared fixtures for the test binaries: cached 512-bit client keys and a
// brute-force DGK decryption oracle.

#ifndef PPDT_TESTS_TEST_SUPPORT_HPP_
#define PPDT_TESTS_TEST_SUPPORT_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <mutex>

#include "ppdt/he/dgk.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/he/params.hpp"

namespace ppdt::testing {

// One keygen per test binary; params.t is adjusted per call.
inline he::ClientKeys TestKeys(int t = 32) {
  static const he::ClientKeys base = he::GenerateClientKeys(he::TestParams());
  he::ClientKeys keys = base;
  keys.params.t = t;
  return keys;
}

// Full DGK decryption by table lookup over all of Z_u. Only feasible because
// u is small; the production code only ever needs the zero check.
class DgkDecryptOracle {
 public:
  explicit DgkDecryptOracle(const he::DgkPrivateKey& sk) : sk_(sk) {
    mpz_class base;
    mpz_powm(base.get_mpz_t(), sk.public_key().g().get_mpz_t(),
             sk.vp().get_mpz_t(), sk.p().get_mpz_t());
    mpz_class acc = 1;
    for (std::uint32_t m = 0; m < sk.public_key().u(); ++m) {
      table_.emplace(acc, m);
      acc = acc * base % sk.p();
    }
  }

  std::uint32_t Decrypt(const he::Ciphertext& c) const {
    mpz_class probe;
    mpz_class reduced = c.value % sk_.p();
    mpz_powm(probe.get_mpz_t(), reduced.get_mpz_t(), sk_.vp().get_mpz_t(),
             sk_.p().get_mpz_t());
    return table_.at(probe);
  }

 private:
  const he::DgkPrivateKey& sk_;
  std::map<mpz_class, std::uint32_t> table_;
};

}  // namespace ppdt::testing

#endif  // PPDT_TESTS_TEST_SUPPORT_HPP_
