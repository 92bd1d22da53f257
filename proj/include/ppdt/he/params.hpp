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

#ifndef PPDT_HE_PARAMS_HPP_
#define PPDT_HE_PARAMS_HPP_

#include <cstdint>

namespace ppdt::he {

class PaillierPublicKey;
class DgkPublicKey;

// Sizes shared by every party of a deployment.
struct ProtocolParams {
  // Bit length of attribute values and thresholds.
  int t = 32;
  // Statistical masking parameter for the blinded comparison value.
  int kappa = 40;
  int paillier_bits = 2048;
  int dgk_bits = 2048;
  // DGK plaintext space; must be prime.
  std::uint32_t dgk_plaintext_space = 65537;
  // Bit length of the share blinder r'.
  int tau = 32;

  // Checks the internal invariants (t >= 2, kappa >= 8, u prime and
  // u > 3(t+2), supported key sizes). Throws Error(kParameter).
  void Validate() const;

  // Validate() plus agreement with concrete keys: 2^(t+kappa+2) < N and the
  // DGK plaintext space equals the key's u.
  void ValidateAgainst(const PaillierPublicKey& paillier,
                       const DgkPublicKey& dgk) const;

  friend bool operator==(const ProtocolParams&,
                         const ProtocolParams&) = default;
};

// Allowed modulus sizes. 512 is for tests.
bool IsSupportedKeySize(int bits);

// Small 512-bit parameter set used by the test suites and the simulator.
ProtocolParams TestParams(int t = 32);

}  // namespace ppdt::he

#endif  // PPDT_HE_PARAMS_HPP_
