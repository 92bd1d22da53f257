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

#include "ppdt/he/keys.hpp"

#include <algorithm>
#include <string_view>
#include <utility>

#include "ppdt/errors.hpp"

namespace ppdt::he {

namespace {

constexpr std::string_view kPrivateMagic = "PPDTSK01";

unsigned long ToUlong(const mpz_class& v, const char* what) {
  if (v < 0 || !v.fits_ulong_p()) {
    throw Error(ErrorCode::kDecode, std::string("key field out of range: ") + what);
  }
  return v.get_ui();
}

}  // namespace

std::uint64_t KeyMaterial::Fingerprint() const {
  return PaillierFingerprint(paillier);
}

ClientKeys GenerateClientKeys(const ProtocolParams& params) {
  params.Validate();
  ClientKeys keys{params, PaillierKeygen(params.paillier_bits),
                  DgkKeygen(params)};
  params.ValidateAgainst(keys.paillier.public_key, keys.dgk.public_key);
  return keys;
}

Bytes EncodeFields(std::span<const mpz_class> fields) {
  Bytes out;
  for (const mpz_class& f : fields) {
    Bytes mag = ToBigEndian(f);
    const auto len = static_cast<std::uint32_t>(mag.size());
    out.push_back(static_cast<std::uint8_t>(len >> 24));
    out.push_back(static_cast<std::uint8_t>(len >> 16));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(len));
    out.insert(out.end(), mag.begin(), mag.end());
  }
  return out;
}

std::vector<mpz_class> DecodeFields(std::span<const std::uint8_t> bytes,
                                    std::size_t count) {
  std::vector<mpz_class> fields;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) {
      throw Error(ErrorCode::kDecode, "key blob: truncated length prefix");
    }
    const std::uint32_t len = (std::uint32_t{bytes[pos]} << 24) |
                              (std::uint32_t{bytes[pos + 1]} << 16) |
                              (std::uint32_t{bytes[pos + 2]} << 8) |
                              std::uint32_t{bytes[pos + 3]};
    pos += 4;
    if (bytes.size() - pos < len) {
      throw Error(ErrorCode::kDecode, "key blob: truncated field");
    }
    auto field = bytes.subspan(pos, len);
    if (!field.empty() && field[0] == 0) {
      throw Error(ErrorCode::kDecode, "key blob: non-minimal magnitude");
    }
    fields.push_back(FromBigEndian(field));
    pos += len;
  }
  if (fields.size() != count) {
    throw Error(ErrorCode::kDecode, "key blob: wrong field count");
  }
  return fields;
}

Bytes SerializePaillierPublic(const PaillierPublicKey& pk) {
  const mpz_class fields[] = {pk.n(), pk.n() + 1};
  return EncodeFields(fields);
}

PaillierPublicKey ParsePaillierPublic(std::span<const std::uint8_t> bytes) {
  auto f = DecodeFields(bytes, 2);
  if (f[1] != f[0] + 1) {
    throw Error(ErrorCode::kDecode, "paillier key: generator must be N + 1");
  }
  try {
    return PaillierPublicKey(f[0]);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDecode, e.what());
  }
}

Bytes SerializeDgkPublic(const DgkPublicKey& pk) {
  const mpz_class fields[] = {pk.n(), pk.g(), pk.h(),
                              mpz_class(static_cast<unsigned long>(pk.u())),
                              mpz_class(pk.subgroup_bits())};
  return EncodeFields(fields);
}

DgkPublicKey ParseDgkPublic(std::span<const std::uint8_t> bytes) {
  auto f = DecodeFields(bytes, 5);
  const unsigned long u = ToUlong(f[3], "u");
  const unsigned long sub = ToUlong(f[4], "subgroup bits");
  if (u > UINT32_MAX || sub > 4096) {
    throw Error(ErrorCode::kDecode, "dgk key: field out of range");
  }
  try {
    return DgkPublicKey(f[0], f[1], f[2], static_cast<std::uint32_t>(u),
                        static_cast<int>(sub));
  } catch (const Error& e) {
    throw Error(ErrorCode::kDecode, e.what());
  }
}

std::uint64_t PaillierFingerprint(const PaillierPublicKey& pk) {
  return Fnv1a64(SerializePaillierPublic(pk));
}

Bytes SerializeClientKeys(const ClientKeys& keys) {
  const ProtocolParams& p = keys.params;
  const DgkPublicKey& dpk = keys.dgk.public_key;
  const mpz_class fields[] = {
      mpz_class(p.t), mpz_class(p.kappa), mpz_class(p.paillier_bits),
      mpz_class(p.dgk_bits),
      mpz_class(static_cast<unsigned long>(p.dgk_plaintext_space)),
      mpz_class(p.tau),
      keys.paillier.private_key.p(), keys.paillier.private_key.q(),
      dpk.n(), dpk.g(), dpk.h(),
      mpz_class(static_cast<unsigned long>(dpk.u())),
      mpz_class(dpk.subgroup_bits()),
      keys.dgk.private_key.p(), keys.dgk.private_key.q(),
      keys.dgk.private_key.vp(), keys.dgk.private_key.vq()};
  Bytes out(kPrivateMagic.begin(), kPrivateMagic.end());
  Bytes body = EncodeFields(fields);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ClientKeys ParseClientKeys(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPrivateMagic.size() ||
      !std::equal(kPrivateMagic.begin(), kPrivateMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::kDecode, "private key file: bad magic");
  }
  auto f = DecodeFields(bytes.subspan(kPrivateMagic.size()), 17);
  ProtocolParams params;
  params.t = static_cast<int>(ToUlong(f[0], "t"));
  params.kappa = static_cast<int>(ToUlong(f[1], "kappa"));
  params.paillier_bits = static_cast<int>(ToUlong(f[2], "paillier_bits"));
  params.dgk_bits = static_cast<int>(ToUlong(f[3], "dgk_bits"));
  params.dgk_plaintext_space = static_cast<std::uint32_t>(ToUlong(f[4], "u"));
  params.tau = static_cast<int>(ToUlong(f[5], "tau"));
  try {
    PaillierPrivateKey psk(f[6], f[7]);
    DgkPublicKey dpk(f[8], f[9], f[10],
                     static_cast<std::uint32_t>(ToUlong(f[11], "u")),
                     static_cast<int>(ToUlong(f[12], "subgroup bits")));
    DgkPrivateKey dsk(dpk, f[13], f[14], f[15], f[16]);
    ClientKeys keys{params, {psk.public_key(), psk}, {dpk, std::move(dsk)}};
    params.ValidateAgainst(keys.paillier.public_key, keys.dgk.public_key);
    return keys;
  } catch (const Error& e) {
    throw Error(ErrorCode::kDecode, std::string("private key file: ") + e.what());
  }
}

}  // namespace ppdt::he
