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

#ifndef PPDT_WIRE_MESSAGE_HPP_
#define PPDT_WIRE_MESSAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "ppdt/compare/messages.hpp"
#include "ppdt/errors.hpp"
#include "ppdt/he/bigint.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/levelsite/token.hpp"
#include "ppdt/tree/slice.hpp"

namespace ppdt::wire {

inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 6;
inline constexpr std::size_t kMaxPayload = std::size_t{64} << 20;

enum class MsgType : std::uint8_t {
  kKeyMaterial = 0x01,
  kSetup = 0x02,
  kSetupAck = 0x03,
  kClassifyStart = 0x04,
  kTraversal = 0x05,
  kBlindedValue = 0x10,
  kBitVector = 0x11,
  kMaskedSequence = 0x12,
  kShareV = 0x13,
  kShareW = 0x14,
  kResult = 0x20,
  kError = 0x7F,
};

std::string_view MsgTypeName(MsgType type);
bool IsKnownMsgType(std::uint8_t byte);

struct KeyMaterialMsg {
  he::KeyMaterial keys;
  friend bool operator==(const KeyMaterialMsg&, const KeyMaterialMsg&) = default;
};

struct SetupMsg {
  tree::LevelSlice slice;
  friend bool operator==(const SetupMsg&, const SetupMsg&) = default;
};

struct SetupAckMsg {
  friend bool operator==(const SetupAckMsg&, const SetupAckMsg&) = default;
};

// Client -> level-site 0.
struct ClassifyStartMsg {
  levelsite::TraversalToken token;
  friend bool operator==(const ClassifyStartMsg&, const ClassifyStartMsg&) = default;
};

// Level-site l -> level-site l+1.
struct TraversalMsg {
  levelsite::TraversalToken token;
  friend bool operator==(const TraversalMsg&, const TraversalMsg&) = default;
};

// Leaf level-site -> client: the re-randomized [[class_id]].
struct ResultMsg {
  compare::SessionId session{};
  he::Ciphertext enc_class;
  friend bool operator==(const ResultMsg&, const ResultMsg&) = default;
};

struct ErrorMsg {
  compare::SessionId session{};
  ErrorCode code = ErrorCode::kProtocol;
  std::string text;
  friend bool operator==(const ErrorMsg&, const ErrorMsg&) = default;
};

using Message = std::variant<KeyMaterialMsg, SetupMsg, SetupAckMsg, ClassifyStartMsg,
                             TraversalMsg, compare::BlindedValueMsg, compare::BitVectorMsg,
                             compare::MaskedSequenceMsg, compare::ShareVMsg,
                             compare::ShareWMsg, ResultMsg, ErrorMsg>;

MsgType TypeOf(const Message& msg);

enum class DecodeFailure {
  kLengthMismatch,
  kBadVersion,
  kUnknownType,
  kMalformedPayload,
  kTooLarge,
};

std::string_view DecodeFailureName(DecodeFailure f);

// Thrown by the frame decoder. Always connection-fatal.
class DecodeError : public Error {
 public:
  DecodeError(DecodeFailure failure, const std::string& what)
      : Error(ErrorCode::kDecode, what), failure_(failure) {}
  DecodeFailure failure() const { return failure_; }

 private:
  DecodeFailure failure_;
};

struct FrameHeader {
  std::uint32_t length = 0;
  MsgType type = MsgType::kError;
};

// Checks size limit, version and type. Nothing of the payload is looked at.
FrameHeader DecodeHeader(std::span<const std::uint8_t> header);

// Throws Error(kEncoding) if the payload would exceed kMaxPayload.
Bytes EncodeFrame(const Message& msg);
// Throws DecodeError. Accepts only the canonical encoding.
Message DecodeFrame(std::span<const std::uint8_t> frame);

// Canonical JSON body of a message (empty for SETUP_ACK).
std::string EncodePayload(const Message& msg);

}  // namespace ppdt::wire

#endif  // PPDT_WIRE_MESSAGE_HPP_
