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

#include "ppdt/wire/message.hpp"

#include <json.hpp>

#include <cstring>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace ppdt::wire {
namespace {

using compare::BitVectorMsg;
using compare::BlindedValueMsg;
using compare::CompareMode;
using compare::MaskedSequenceMsg;
using compare::SessionId;
using compare::ShareVMsg;
using compare::ShareWMsg;
using he::Ciphertext;
using he::Scheme;
using nlohmann::json;

[[noreturn]] void Malformed(const std::string& what) {
  throw DecodeError(DecodeFailure::kMalformedPayload, "malformed payload: " + what);
}

// ---- field helpers --------------------------------------------------------

std::string SessionToText(const SessionId& id) { return ToHex(id); }

SessionId SessionFromText(const std::string& text) {
  if (text.size() != 32) Malformed("session id must be 32 hex digits");
  SessionId id{};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    Malformed("session id must be lowercase hex");
  };
  for (std::size_t i = 0; i < id.size(); ++i) {
    id[i] = static_cast<std::uint8_t>(nibble(text[2 * i]) << 4 | nibble(text[2 * i + 1]));
  }
  return id;
}

std::string BigToText(const mpz_class& v) { return Base64UrlEncode(ToBigEndian(v)); }

mpz_class BigFromText(const std::string& text) {
  Bytes bytes = Base64UrlDecode(text);
  if (!bytes.empty() && bytes[0] == 0) Malformed("big integer with leading zero byte");
  return FromBigEndian(bytes);
}

const json& Field(const json& obj, const char* key) {
  if (!obj.is_object()) Malformed("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(std::string("missing '") + key + "'");
  return *it;
}

const std::string& Str(const json& obj, const char* key) {
  const json& j = Field(obj, key);
  if (!j.is_string()) Malformed(std::string("'") + key + "' must be a string");
  return j.get_ref<const std::string&>();
}

std::uint64_t U64(const json& obj, const char* key) {
  const json& j = Field(obj, key);
  if (!j.is_number_unsigned()) Malformed(std::string("'") + key + "' must be an unsigned integer");
  return j.get<std::uint64_t>();
}

bool Bool(const json& obj, const char* key) {
  const json& j = Field(obj, key);
  if (!j.is_boolean()) Malformed(std::string("'") + key + "' must be a boolean");
  return j.get<bool>();
}

const json& Arr(const json& obj, const char* key) {
  const json& j = Field(obj, key);
  if (!j.is_array()) Malformed(std::string("'") + key + "' must be an array");
  return j;
}

json CtList(const std::vector<Ciphertext>& cts) {
  json a = json::array();
  for (const auto& c : cts) a.push_back(BigToText(c.value));
  return a;
}

std::vector<Ciphertext> CtListFrom(const json& obj, const char* key, Scheme scheme) {
  std::vector<Ciphertext> out;
  for (const json& e : Arr(obj, key)) {
    if (!e.is_string()) Malformed(std::string("'") + key + "' entries must be strings");
    out.push_back({BigFromText(e.get<std::string>()), scheme});
  }
  return out;
}

Ciphertext CtFrom(const json& obj, const char* key, Scheme scheme) {
  return {BigFromText(Str(obj, key)), scheme};
}

// ---- composite bodies -----------------------------------------------------

json ParamsToJson(const he::ProtocolParams& p) {
  return {{"dgk_bits", p.dgk_bits},   {"kappa", p.kappa},
          {"paillier_bits", p.paillier_bits}, {"t", p.t},
          {"tau", p.tau},             {"u", p.dgk_plaintext_space}};
}

int SmallInt(const json& obj, const char* key) {
  std::uint64_t v = U64(obj, key);
  if (v > 1u << 20) Malformed(std::string("'") + key + "' out of range");
  return static_cast<int>(v);
}

he::ProtocolParams ParamsFromJson(const json& j) {
  he::ProtocolParams p;
  p.dgk_bits = SmallInt(j, "dgk_bits");
  p.kappa = SmallInt(j, "kappa");
  p.paillier_bits = SmallInt(j, "paillier_bits");
  p.t = SmallInt(j, "t");
  p.tau = SmallInt(j, "tau");
  std::uint64_t u = U64(j, "u");
  if (u > 0xffffffffu) Malformed("'u' out of range");
  p.dgk_plaintext_space = static_cast<std::uint32_t>(u);
  return p;
}

json KeysToJson(const he::KeyMaterial& k) {
  return {{"dgk", Base64UrlEncode(he::SerializeDgkPublic(k.dgk))},
          {"paillier", Base64UrlEncode(he::SerializePaillierPublic(k.paillier))},
          {"params", ParamsToJson(k.params)}};
}

he::KeyMaterial KeysFromJson(const json& j) {
  he::KeyMaterial k;
  k.params = ParamsFromJson(Field(j, "params"));
  k.dgk = he::ParseDgkPublic(Base64UrlDecode(Str(j, "dgk")));
  k.paillier = he::ParsePaillierPublic(Base64UrlDecode(Str(j, "paillier")));
  return k;
}

json TokenToJson(const levelsite::TraversalToken& t) {
  return {{"bogus", t.bogus},
          {"client", t.client_endpoint},
          {"features", CtList(t.enc_features)},
          {"index", t.next_index},
          {"session", SessionToText(t.session)}};
}

levelsite::TraversalToken TokenFromJson(const json& j) {
  levelsite::TraversalToken t;
  t.bogus = Bool(j, "bogus");
  t.client_endpoint = Str(j, "client");
  t.enc_features = CtListFrom(j, "features", Scheme::kPaillier);
  t.next_index = U64(j, "index");
  t.session = SessionFromText(Str(j, "session"));
  return t;
}

std::string FingerprintText(std::uint64_t fp) {
  Bytes b(8);
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(fp >> (56 - 8 * i));
  return ToHex(b);
}

json SliceToJson(const tree::LevelSlice& s) {
  json nodes = json::array();
  for (const auto& n : s.nodes) {
    if (const auto* leaf = std::get_if<tree::EncLeaf>(&n)) {
      nodes.push_back({{"class", BigToText(leaf->enc_class.value)}});
    } else {
      const auto& in = std::get<tree::EncInternal>(n);
      nodes.push_back({{"attr", in.attribute},
                       {"false", in.false_child},
                       {"mode", std::string(compare::ModeName(in.mode))},
                       {"neg_threshold", BigToText(in.enc_neg_threshold.value)},
                       {"true", in.true_child}});
    }
  }
  return {{"attribute_count", s.attribute_count},
          {"depth", s.depth},
          {"fingerprint", FingerprintText(s.fingerprint())},
          {"keys", KeysToJson(s.keys)},
          {"level", s.level},
          {"nodes", std::move(nodes)}};
}

tree::LevelSlice SliceFromJson(const json& j) {
  tree::LevelSlice s;
  s.attribute_count = U64(j, "attribute_count");
  s.depth = U64(j, "depth");
  s.keys = KeysFromJson(Field(j, "keys"));
  s.level = U64(j, "level");
  for (const json& n : Arr(j, "nodes")) {
    if (!n.is_object()) Malformed("slice node must be an object");
    if (n.contains("class")) {
      s.nodes.push_back(tree::EncLeaf{CtFrom(n, "class", Scheme::kPaillier)});
    } else {
      tree::EncInternal in;
      in.attribute = U64(n, "attr");
      in.false_child = U64(n, "false");
      in.mode = compare::ParseMode(Str(n, "mode"));
      in.enc_neg_threshold = CtFrom(n, "neg_threshold", Scheme::kPaillier);
      in.true_child = U64(n, "true");
      s.nodes.push_back(std::move(in));
    }
  }
  if (Str(j, "fingerprint") != FingerprintText(s.fingerprint())) {
    Malformed("slice fingerprint does not match its keys");
  }
  return s;
}

ErrorCode ErrorCodeFromName(const std::string& name) {
  for (ErrorCode c : {ErrorCode::kParameter, ErrorCode::kRange, ErrorCode::kType,
                      ErrorCode::kProtocol, ErrorCode::kEncoding, ErrorCode::kDecode,
                      ErrorCode::kIo, ErrorCode::kNetwork}) {
    if (ErrorCodeName(c) == name) return c;
  }
  Malformed("unknown error code '" + name + "'");
}

// ---- per-message ----------------------------------------------------------

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

json ToJson(const Message& msg) {
  return std::visit(
      Overload{
          [](const KeyMaterialMsg& m) { return KeysToJson(m.keys); },
          [](const SetupMsg& m) { return SliceToJson(m.slice); },
          [](const SetupAckMsg&) { return json(); },
          [](const ClassifyStartMsg& m) { return TokenToJson(m.token); },
          [](const TraversalMsg& m) { return TokenToJson(m.token); },
          [](const BlindedValueMsg& m) {
            return json{{"blinded", BigToText(m.blinded.value)},
                        {"mode", std::string(compare::ModeName(m.mode))},
                        {"session", SessionToText(m.session)}};
          },
          [](const BitVectorMsg& m) {
            return json{{"bits", CtList(m.bits)}, {"session", SessionToText(m.session)}};
          },
          [](const MaskedSequenceMsg& m) {
            return json{{"items", CtList(m.items)}, {"session", SessionToText(m.session)}};
          },
          [](const ShareVMsg& m) {
            return json{{"session", SessionToText(m.session)}, {"v", m.v}};
          },
          [](const ShareWMsg& m) {
            return json{{"session", SessionToText(m.session)}, {"w", m.w}};
          },
          [](const ResultMsg& m) {
            return json{{"class", BigToText(m.enc_class.value)},
                        {"session", SessionToText(m.session)}};
          },
          [](const ErrorMsg& m) {
            return json{{"code", std::string(ErrorCodeName(m.code))},
                        {"session", SessionToText(m.session)},
                        {"text", m.text}};
          },
      },
      msg);
}

Message FromJson(MsgType type, const json& j) {
  switch (type) {
    case MsgType::kKeyMaterial:
      return KeyMaterialMsg{KeysFromJson(j)};
    case MsgType::kSetup:
      return SetupMsg{SliceFromJson(j)};
    case MsgType::kSetupAck:
      return SetupAckMsg{};
    case MsgType::kClassifyStart:
      return ClassifyStartMsg{TokenFromJson(j)};
    case MsgType::kTraversal:
      return TraversalMsg{TokenFromJson(j)};
    case MsgType::kBlindedValue:
      return BlindedValueMsg{SessionFromText(Str(j, "session")),
                             CtFrom(j, "blinded", Scheme::kPaillier),
                             compare::ParseMode(Str(j, "mode"))};
    case MsgType::kBitVector:
      return BitVectorMsg{SessionFromText(Str(j, "session")),
                          CtListFrom(j, "bits", Scheme::kDgk)};
    case MsgType::kMaskedSequence:
      return MaskedSequenceMsg{SessionFromText(Str(j, "session")),
                               CtListFrom(j, "items", Scheme::kDgk)};
    case MsgType::kShareV:
      return ShareVMsg{SessionFromText(Str(j, "session")), U64(j, "v")};
    case MsgType::kShareW:
      return ShareWMsg{SessionFromText(Str(j, "session")), U64(j, "w")};
    case MsgType::kResult:
      return ResultMsg{SessionFromText(Str(j, "session")),
                       CtFrom(j, "class", Scheme::kPaillier)};
    case MsgType::kError:
      return ErrorMsg{SessionFromText(Str(j, "session")), ErrorCodeFromName(Str(j, "code")),
                      Str(j, "text")};
  }
  Malformed("unhandled type");
}

constexpr MsgType kTypes[] = {
    MsgType::kKeyMaterial,  MsgType::kSetup,          MsgType::kSetupAck,
    MsgType::kClassifyStart, MsgType::kTraversal,     MsgType::kBlindedValue,
    MsgType::kBitVector,    MsgType::kMaskedSequence, MsgType::kShareV,
    MsgType::kShareW,       MsgType::kResult,         MsgType::kError};

}  // namespace

std::string_view MsgTypeName(MsgType type) {
  switch (type) {
    case MsgType::kKeyMaterial: return "KEY_MATERIAL";
    case MsgType::kSetup: return "SETUP";
    case MsgType::kSetupAck: return "SETUP_ACK";
    case MsgType::kClassifyStart: return "CLASSIFY_START";
    case MsgType::kTraversal: return "TRAVERSAL";
    case MsgType::kBlindedValue: return "BLINDED_VALUE";
    case MsgType::kBitVector: return "BIT_VECTOR";
    case MsgType::kMaskedSequence: return "MASKED_SEQUENCE";
    case MsgType::kShareV: return "SHARE_V";
    case MsgType::kShareW: return "SHARE_W";
    case MsgType::kResult: return "RESULT";
    case MsgType::kError: return "ERROR";
  }
  return "UNKNOWN";
}

bool IsKnownMsgType(std::uint8_t byte) {
  for (MsgType t : kTypes) {
    if (static_cast<std::uint8_t>(t) == byte) return true;
  }
  return false;
}

MsgType TypeOf(const Message& msg) {
  // Variant alternatives are declared in catalog order.
  return kTypes[msg.index()];
}

std::string_view DecodeFailureName(DecodeFailure f) {
  switch (f) {
    case DecodeFailure::kLengthMismatch: return "length mismatch";
    case DecodeFailure::kBadVersion: return "bad version";
    case DecodeFailure::kUnknownType: return "unknown message type";
    case DecodeFailure::kMalformedPayload: return "malformed payload";
    case DecodeFailure::kTooLarge: return "payload too large";
  }
  return "unknown";
}

std::string EncodePayload(const Message& msg) {
  if (std::holds_alternative<SetupAckMsg>(msg)) return {};
  return ToJson(msg).dump(-1, ' ', false, json::error_handler_t::replace);
}

Bytes EncodeFrame(const Message& msg) {
  const std::string body = EncodePayload(msg);
  if (body.size() > kMaxPayload) {
    throw Error(ErrorCode::kEncoding, "frame payload exceeds 64 MiB");
  }
  Bytes out(kHeaderSize + body.size());
  const auto n = static_cast<std::uint32_t>(body.size());
  out[0] = static_cast<std::uint8_t>(n >> 24);
  out[1] = static_cast<std::uint8_t>(n >> 16);
  out[2] = static_cast<std::uint8_t>(n >> 8);
  out[3] = static_cast<std::uint8_t>(n);
  out[4] = kVersion;
  out[5] = static_cast<std::uint8_t>(TypeOf(msg));
  std::memcpy(out.data() + kHeaderSize, body.data(), body.size());
  return out;
}

FrameHeader DecodeHeader(std::span<const std::uint8_t> header) {
  if (header.size() < kHeaderSize) {
    throw DecodeError(DecodeFailure::kLengthMismatch, "frame shorter than its header");
  }
  FrameHeader h;
  h.length = std::uint32_t{header[0]} << 24 | std::uint32_t{header[1]} << 16 |
             std::uint32_t{header[2]} << 8 | std::uint32_t{header[3]};
  if (h.length > kMaxPayload) {
    throw DecodeError(DecodeFailure::kTooLarge, "frame payload exceeds 64 MiB");
  }
  if (header[4] != kVersion) {
    throw DecodeError(DecodeFailure::kBadVersion,
                      "unsupported frame version " + std::to_string(header[4]));
  }
  if (!IsKnownMsgType(header[5])) {
    throw DecodeError(DecodeFailure::kUnknownType,
                      "unknown message type " + std::to_string(header[5]));
  }
  h.type = static_cast<MsgType>(header[5]);
  return h;
}

Message DecodeFrame(std::span<const std::uint8_t> frame) {
  const FrameHeader h = DecodeHeader(frame);
  if (frame.size() - kHeaderSize != h.length) {
    throw DecodeError(DecodeFailure::kLengthMismatch,
                      "length field " + std::to_string(h.length) + " but " +
                          std::to_string(frame.size() - kHeaderSize) + " payload bytes");
  }
  const std::string_view body(reinterpret_cast<const char*>(frame.data() + kHeaderSize),
                              h.length);
  if (h.type == MsgType::kSetupAck) {
    if (!body.empty()) Malformed("SETUP_ACK carries no body");
    return SetupAckMsg{};
  }
  Message msg;
  try {
    json j = json::parse(body);
    if (!j.is_object()) Malformed("payload must be a JSON object");
    msg = FromJson(h.type, j);
  } catch (const DecodeError&) {
    throw;
  } catch (const json::exception& e) {
    Malformed(e.what());
  } catch (const Error& e) {
    Malformed(e.what());
  }
  // Only the canonical form is accepted: field order, spacing, numbers.
  if (EncodePayload(msg) != body) Malformed("payload is not in canonical form");
  return msg;
}

}  // namespace ppdt::wire
