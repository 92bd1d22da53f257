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

#ifndef PPDT_COMPARE_MESSAGES_HPP_
#define PPDT_COMPARE_MESSAGES_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ppdt/he/ciphertext.hpp"

namespace ppdt::compare {

// 16 random bytes identifying one classification query end-to-end.
using SessionId = std::array<std::uint8_t, 16>;

SessionId NewSessionId();

enum class CompareMode : std::uint8_t {
  kNumeric,   // beta = 1{T <= x}
  kEquality,  // beta = 1{T == x}
};

std::string_view ModeName(CompareMode mode);
// Throws Error(kDecode) on anything but "numeric" / "equality".
CompareMode ParseMode(std::string_view name);

// Level-site -> client: the blinded value [[M]].
struct BlindedValueMsg {
  SessionId session{};
  he::Ciphertext blinded;
  CompareMode mode = CompareMode::kNumeric;
  friend bool operator==(const BlindedValueMsg&,
                         const BlindedValueMsg&) = default;
};

// Client -> level-site: DGK encryptions of the t+1 low bits of M, lsb first.
struct BitVectorMsg {
  SessionId session{};
  std::vector<he::Ciphertext> bits;
  friend bool operator==(const BitVectorMsg&, const BitVectorMsg&) = default;
};

// Level-site -> client: t+2 shuffled, masked DGK ciphertexts.
struct MaskedSequenceMsg {
  SessionId session{};
  std::vector<he::Ciphertext> items;
  friend bool operator==(const MaskedSequenceMsg&,
                         const MaskedSequenceMsg&) = default;
};

// Level-site -> client: its share blinded with r'.
struct ShareVMsg {
  SessionId session{};
  std::uint64_t v = 0;
  friend bool operator==(const ShareVMsg&, const ShareVMsg&) = default;
};

// Client -> level-site: v with the lsb flipped by the client share.
struct ShareWMsg {
  SessionId session{};
  std::uint64_t w = 0;
  friend bool operator==(const ShareWMsg&, const ShareWMsg&) = default;
};

}  // namespace ppdt::compare

#endif  // PPDT_COMPARE_MESSAGES_HPP_
