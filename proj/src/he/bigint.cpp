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

#include "ppdt/he/bigint.hpp"

#include <sys/random.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "ppdt/errors.hpp"

namespace ppdt {

void FillRandom(std::span<std::uint8_t> out) {
  std::size_t filled = 0;
  while (filled < out.size()) {
    ssize_t n = getrandom(out.data() + filled, out.size() - filled, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kIo,
                  std::string("getrandom failed: ") + std::strerror(errno));
    }
    filled += static_cast<std::size_t>(n);
  }
}

std::uint64_t RandomU64() {
  std::array<std::uint8_t, 8> buf;
  FillRandom(buf);
  std::uint64_t v = 0;
  for (std::uint8_t b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t RandomBelow(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kRange, "RandomBelow: zero bound");
  // Rejection sampling over the largest multiple of bound.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = RandomU64();
    if (v < limit) return v % bound;
  }
}

mpz_class RandomBits(std::size_t bits) {
  if (bits == 0) return 0;
  Bytes buf((bits + 7) / 8);
  FillRandom(buf);
  const std::size_t excess = buf.size() * 8 - bits;
  buf[0] &= static_cast<std::uint8_t>(0xFF >> excess);
  return FromBigEndian(buf);
}

mpz_class RandomBelow(const mpz_class& bound) {
  if (bound <= 0) throw Error(ErrorCode::kRange, "RandomBelow: bound <= 0");
  const std::size_t bits = BitLength(bound);
  for (;;) {
    mpz_class v = RandomBits(bits);
    if (v < bound) return v;
  }
}

mpz_class RandomInRange(const mpz_class& lo, const mpz_class& hi) {
  if (hi <= lo) throw Error(ErrorCode::kRange, "RandomInRange: empty range");
  return lo + RandomBelow(mpz_class(hi - lo));
}

mpz_class RandomUnit(const mpz_class& n) {
  for (;;) {
    mpz_class r = RandomBelow(n);
    if (r == 0) continue;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
    if (g == 1) return r;
  }
}

mpz_class RandomPrime(std::size_t bits) {
  if (bits < 8) throw Error(ErrorCode::kParameter, "RandomPrime: too small");
  for (;;) {
    mpz_class candidate = RandomBits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), candidate.get_mpz_t());
    if (BitLength(p) == bits) return p;
  }
}

std::size_t BitLength(const mpz_class& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Bytes ToBigEndian(const mpz_class& v) {
  if (v < 0) throw Error(ErrorCode::kRange, "ToBigEndian: negative value");
  if (v == 0) return {};
  Bytes out((BitLength(v) + 7) / 8);
  std::size_t count = 0;
  mpz_export(out.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(count);
  return out;
}

mpz_class FromBigEndian(std::span<const std::uint8_t> bytes) {
  mpz_class v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

int AlphabetIndex(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '-') return 62;
  if (c == '_') return 63;
  return -1;
}

}  // namespace

std::string Base64UrlEncode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() * 4 + 2) / 3);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    std::uint32_t chunk = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kAlphabet[(chunk >> 18) & 63]);
    out.push_back(kAlphabet[(chunk >> 12) & 63]);
    out.push_back(kAlphabet[(chunk >> 6) & 63]);
    out.push_back(kAlphabet[chunk & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t chunk = bytes[i] << 16;
    out.push_back(kAlphabet[(chunk >> 18) & 63]);
    out.push_back(kAlphabet[(chunk >> 12) & 63]);
  } else if (rest == 2) {
    std::uint32_t chunk = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kAlphabet[(chunk >> 18) & 63]);
    out.push_back(kAlphabet[(chunk >> 12) & 63]);
    out.push_back(kAlphabet[(chunk >> 6) & 63]);
  }
  return out;
}

Bytes Base64UrlDecode(std::string_view text) {
  if (text.size() % 4 == 1) {
    throw Error(ErrorCode::kDecode, "base64url: impossible length");
  }
  Bytes out;
  out.reserve(text.size() * 3 / 4);
  std::uint32_t acc = 0;
  int acc_bits = 0;
  for (char c : text) {
    int idx = AlphabetIndex(c);
    if (idx < 0) throw Error(ErrorCode::kDecode, "base64url: bad character");
    acc = (acc << 6) | static_cast<std::uint32_t>(idx);
    acc_bits += 6;
    if (acc_bits >= 8) {
      acc_bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> acc_bits) & 0xFF));
    }
  }
  if (acc_bits > 0 && (acc & ((1u << acc_bits) - 1)) != 0) {
    throw Error(ErrorCode::kDecode, "base64url: non-zero trailing bits");
  }
  return out;
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

std::uint64_t Fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ppdt
