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

#ifndef PPDT_TREE_MODEL_HPP_
#define PPDT_TREE_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ppdt/compare/messages.hpp"

namespace ppdt::tree {

using compare::CompareMode;

enum class AttributeKind { kNumeric, kCategorical };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  // Label encoder for categorical attributes: category -> t-bit code.
  std::map<std::string, std::uint64_t> encoding;

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct AttributeSchema {
  std::vector<Attribute> attributes;
  // Index is the class id.
  std::vector<std::string> classes;

  std::optional<std::size_t> FindAttribute(const std::string& name) const;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

// Children index into the next level's node list. They are optional only so
// that malformed input can be represented and reported by ValidateTree.
struct InternalNode {
  std::size_t attribute = 0;
  std::uint64_t threshold = 0;
  CompareMode mode = CompareMode::kNumeric;
  std::optional<std::size_t> true_child;
  std::optional<std::size_t> false_child;

  friend bool operator==(const InternalNode&, const InternalNode&) = default;
};

struct LeafNode {
  std::size_t class_id = 0;
  friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

using TreeNode = std::variant<InternalNode, LeafNode>;

// A decision tree stored level by level. Level 0 holds the root; leaves may
// sit on any level.
struct TreeModel {
  AttributeSchema schema;
  std::vector<std::vector<TreeNode>> levels;

  std::size_t depth() const { return levels.size(); }

  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

struct Violation {
  std::size_t level = 0;
  std::size_t index = 0;
  std::string what;
};

// Every broken invariant, with node coordinates. Empty means valid.
std::vector<Violation> ValidateTree(const TreeModel& model, int t);

using FeatureVector = std::vector<std::uint64_t>;

// Raw record in schema order. Numeric values must be decimal integers in
// [0, 2^t); categorical values must be known categories.
// Throws Error(kEncoding) for unknown categories or missing attributes and
// Error(kRange) for out-of-range numerics.
FeatureVector EncodeFeatureVector(const AttributeSchema& schema,
                                  const std::map<std::string, std::string>& raw,
                                  int t);

struct Classification {
  std::size_t class_id = 0;
  std::size_t termination_level = 0;

  friend bool operator==(const Classification&, const Classification&) = default;
};

// The plaintext reference walk: beta = 1{T <= x} or 1{T == x}; beta = 1
// follows true_child. Requires a valid model.
Classification PlaintextClassify(const TreeModel& model, const FeatureVector& fv);

struct DepthStats {
  double average = 0;
  std::size_t median = 0;
  std::size_t third_quartile = 0;
  std::size_t max = 0;
  std::size_t size = 0;

  friend bool operator==(const DepthStats&, const DepthStats&) = default;
};

// Nearest-rank statistics of termination levels over a dataset.
// Throws Error(kParameter) on an empty dataset.
DepthStats ComputeDepthStats(const TreeModel& model,
                             const std::vector<FeatureVector>& dataset);

}  // namespace ppdt::tree

#endif  // PPDT_TREE_MODEL_HPP_
