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

#ifndef PPDT_HE_CIPHERTEXT_HPP_
#define PPDT_HE_CIPHERTEXT_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <string_view>

namespace ppdt::he {

enum class Scheme : std::uint8_t { kPaillier = 1, kDgk = 2 };

inline std::string_view SchemeName(Scheme s) {
  return s == Scheme::kPaillier ? "paillier" : "dgk";
}

// An encrypted integer. The residue is meaningful only together with the
// public key it was produced under; the tag guards against mixing schemes.
struct Ciphertext {
  mpz_class value;
  Scheme scheme = Scheme::kPaillier;

  friend bool operator==(const Ciphertext& a, const Ciphertext& b) {
    return a.scheme == b.scheme && a.value == b.value;
  }
};

}  // namespace ppdt::he

#endif  // PPDT_HE_CIPHERTEXT_HPP_
