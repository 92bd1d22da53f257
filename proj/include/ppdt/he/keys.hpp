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

#ifndef PPDT_HE_KEYS_HPP_
#define PPDT_HE_KEYS_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "ppdt/he/bigint.hpp"
#include "ppdt/he/dgk.hpp"
#include "ppdt/he/paillier.hpp"
#include "ppdt/he/params.hpp"

namespace ppdt::he {

// Everything a client publishes: parameters plus both public keys.
struct KeyMaterial {
  ProtocolParams params;
  PaillierPublicKey paillier;
  DgkPublicKey dgk;

  // Identifies the Paillier key that slices are bound to.
  std::uint64_t Fingerprint() const;

  friend bool operator==(const KeyMaterial&, const KeyMaterial&) = default;
};

// The client's full key set. Never leaves the client.
struct ClientKeys {
  ProtocolParams params;
  PaillierKeypair paillier;
  DgkKeypair dgk;

  KeyMaterial Public() const { return {params, paillier.public_key, dgk.public_key}; }
};

// Validates params, then generates both keypairs.
ClientKeys GenerateClientKeys(const ProtocolParams& params);

// Length-prefixed big-endian fields: each field is a 4-byte big-endian byte
// count followed by the unsigned magnitude.
Bytes EncodeFields(std::span<const mpz_class> fields);
// Throws Error(kDecode) unless the buffer holds exactly `count` fields.
std::vector<mpz_class> DecodeFields(std::span<const std::uint8_t> bytes,
                                    std::size_t count);

Bytes SerializePaillierPublic(const PaillierPublicKey& pk);
PaillierPublicKey ParsePaillierPublic(std::span<const std::uint8_t> bytes);
Bytes SerializeDgkPublic(const DgkPublicKey& pk);
DgkPublicKey ParseDgkPublic(std::span<const std::uint8_t> bytes);

std::uint64_t PaillierFingerprint(const PaillierPublicKey& pk);

// Local private-key file body (magic + fields). Not a wire message.
Bytes SerializeClientKeys(const ClientKeys& keys);
ClientKeys ParseClientKeys(std::span<const std::uint8_t> bytes);

}  // namespace ppdt::he

#endif  // PPDT_HE_KEYS_HPP_
