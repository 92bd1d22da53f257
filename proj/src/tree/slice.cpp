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

#include "ppdt/tree/slice.hpp"

#include <string>

#include "ppdt/errors.hpp"

namespace ppdt::tree {

std::vector<LevelSlice> PartitionAndEncrypt(const TreeModel& model,
                                            const he::KeyMaterial& keys) {
  keys.params.ValidateAgainst(keys.paillier, keys.dgk);
  auto violations = ValidateTree(model, keys.params.t);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    throw Error(ErrorCode::kParameter,
                "invalid tree at (" + std::to_string(v.level) + "," +
                    std::to_string(v.index) + "): " + v.what);
  }
  const he::PaillierPublicKey& pk = keys.paillier;
  if (mpz_class(static_cast<unsigned long>(model.schema.classes.size())) >= pk.n()) {
    throw Error(ErrorCode::kParameter, "class count does not fit plaintext space");
  }

  std::vector<LevelSlice> slices;
  slices.reserve(model.depth());
  for (std::size_t l = 0; l < model.depth(); ++l) {
    LevelSlice slice;
    slice.level = l;
    slice.depth = model.depth();
    slice.attribute_count = model.schema.attributes.size();
    slice.keys = keys;
    for (const TreeNode& node : model.levels[l]) {
      if (const auto* leaf = std::get_if<LeafNode>(&node)) {
        slice.nodes.push_back(EncLeaf{
            pk.Encrypt(mpz_class(static_cast<unsigned long>(leaf->class_id)))});
        continue;
      }
      const auto& in = std::get<InternalNode>(node);
      const mpz_class neg = -mpz_class(static_cast<unsigned long>(in.threshold));
      slice.nodes.push_back(EncInternal{in.attribute, pk.Encrypt(pk.EncodeSigned(neg)),
                                        in.mode, *in.true_child, *in.false_child});
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

}  // namespace ppdt::tree
