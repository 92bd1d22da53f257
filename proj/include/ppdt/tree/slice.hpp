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

#ifndef PPDT_TREE_SLICE_HPP_
#define PPDT_TREE_SLICE_HPP_

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "ppdt/compare/messages.hpp"
#include "ppdt/he/ciphertext.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/tree/model.hpp"

namespace ppdt::tree {

struct EncInternal {
  std::size_t attribute = 0;
  // [[encode_signed(-T)]], ready to be added into the blinded value.
  he::Ciphertext enc_neg_threshold;
  CompareMode mode = CompareMode::kNumeric;
  std::size_t true_child = 0;
  std::size_t false_child = 0;

  friend bool operator==(const EncInternal&, const EncInternal&) = default;
};

struct EncLeaf {
  he::Ciphertext enc_class;
  friend bool operator==(const EncLeaf&, const EncLeaf&) = default;
};

using SliceNode = std::variant<EncInternal, EncLeaf>;

// One level of the tree as held by its level-site. Carries no plaintext
// threshold or class id; it is bound to one client's public keys.
struct LevelSlice {
  std::size_t level = 0;
  std::size_t depth = 0;
  std::size_t attribute_count = 0;
  std::vector<SliceNode> nodes;
  he::KeyMaterial keys;

  std::uint64_t fingerprint() const { return keys.Fingerprint(); }

  friend bool operator==(const LevelSlice&, const LevelSlice&) = default;
};

// Encrypts thresholds and leaf classes under the client's Paillier key and
// splits the model into one slice per level. Throws Error(kParameter) if the
// model is invalid or the keys do not match the params.
std::vector<LevelSlice> PartitionAndEncrypt(const TreeModel& model,
                                            const he::KeyMaterial& keys);

}  // namespace ppdt::tree

#endif  // PPDT_TREE_SLICE_HPP_
