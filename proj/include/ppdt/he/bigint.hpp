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

#ifndef PPDT_HE_BIGINT_HPP_
#define PPDT_HE_BIGINT_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ppdt {

using Bytes = std::vector<std::uint8_t>;

// Cryptographic randomness. All functions draw from the kernel CSPRNG and are
// safe to call from any thread.
void FillRandom(std::span<std::uint8_t> out);
std::uint64_t RandomU64();
// Uniform in [0, bound). bound must be positive.
std::uint64_t RandomBelow(std::uint64_t bound);
mpz_class RandomBits(std::size_t bits);
// Uniform in [0, bound).
mpz_class RandomBelow(const mpz_class& bound);
// Uniform in [lo, hi).
mpz_class RandomInRange(const mpz_class& lo, const mpz_class& hi);
// Uniform unit of Z_n^*.
mpz_class RandomUnit(const mpz_class& n);
// Random probable prime of exactly `bits` bits with the top two bits set.
mpz_class RandomPrime(std::size_t bits);

std::size_t BitLength(const mpz_class& v);

// Unsigned big-endian magnitude, minimal length (zero encodes as no bytes).
Bytes ToBigEndian(const mpz_class& v);
mpz_class FromBigEndian(std::span<const std::uint8_t> bytes);

// RFC 4648 base64url without padding.
std::string Base64UrlEncode(std::span<const std::uint8_t> bytes);
// Throws Error(kDecode) on characters outside the alphabet, on an impossible
// length, or on non-zero trailing bits (non-canonical input).
Bytes Base64UrlDecode(std::string_view text);

std::string ToHex(std::span<const std::uint8_t> bytes);

// FNV-1a, 64-bit.
std::uint64_t Fnv1a64(std::span<const std::uint8_t> bytes);

}  // namespace ppdt

#endif  // PPDT_HE_BIGINT_HPP_
