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

#include "ppdt/tree/model.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>
#include <string>

#include "ppdt/errors.hpp"

namespace ppdt::tree {

namespace {

std::string Describe(std::size_t l, std::size_t k) {
  return "(" + std::to_string(l) + "," + std::to_string(k) + ")";
}

// ceil(p * n) with p = num / den, as a 1-based rank.
std::size_t NearestRank(std::size_t n, std::size_t num, std::size_t den) {
  return std::max<std::size_t>(1, (num * n + den - 1) / den);
}

}  // namespace

std::optional<std::size_t> AttributeSchema::FindAttribute(
    const std::string& name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<Violation> ValidateTree(const TreeModel& model, int t) {
  std::vector<Violation> out;
  auto flag = [&](std::size_t l, std::size_t k, std::string what) {
    out.push_back({l, k, std::move(what)});
  };
  const std::uint64_t limit = std::uint64_t{1} << t;
  const AttributeSchema& schema = model.schema;

  if (schema.classes.empty()) flag(0, 0, "schema has no classes");
  std::set<std::string> names;
  for (const Attribute& attr : schema.attributes) {
    if (!names.insert(attr.name).second) {
      flag(0, 0, "duplicate attribute name '" + attr.name + "'");
    }
    std::set<std::uint64_t> codes;
    for (const auto& [category, code] : attr.encoding) {
      if (code >= limit) {
        flag(0, 0, "attribute '" + attr.name + "' code for '" + category +
                       "' does not fit in t bits");
      }
      if (!codes.insert(code).second) {
        flag(0, 0, "attribute '" + attr.name + "' encoding is not injective");
      }
    }
    if (attr.kind == AttributeKind::kNumeric && !attr.encoding.empty()) {
      flag(0, 0, "numeric attribute '" + attr.name + "' has an encoding");
    }
  }

  if (model.levels.empty()) {
    flag(0, 0, "tree has no levels");
    return out;
  }
  if (model.levels[0].size() != 1) {
    flag(0, 0, "level 0 must hold exactly one node");
  }

  const std::size_t depth = model.levels.size();
  std::vector<std::vector<std::size_t>> parents(depth);
  for (std::size_t l = 0; l < depth; ++l) parents[l].assign(model.levels[l].size(), 0);

  for (std::size_t l = 0; l < depth; ++l) {
    if (model.levels[l].empty()) flag(l, 0, "level has no nodes");
    for (std::size_t k = 0; k < model.levels[l].size(); ++k) {
      const TreeNode& node = model.levels[l][k];
      if (const auto* leaf = std::get_if<LeafNode>(&node)) {
        if (leaf->class_id >= schema.classes.size()) {
          flag(l, k, "leaf class id out of range");
        }
        continue;
      }
      const auto& in = std::get<InternalNode>(node);
      if (in.attribute >= schema.attributes.size()) {
        flag(l, k, "attribute index out of range");
      } else {
        const AttributeKind kind = schema.attributes[in.attribute].kind;
        if (in.mode == CompareMode::kNumeric && kind != AttributeKind::kNumeric) {
          flag(l, k, "numeric comparison on a categorical attribute");
        }
        if (in.mode == CompareMode::kEquality && kind != AttributeKind::kCategorical) {
          flag(l, k, "equality comparison on a numeric attribute");
        }
      }
      if (in.threshold >= limit) flag(l, k, "threshold does not fit in t bits");
      if (l + 1 == depth) {
        flag(l, k, "internal node on the last level");
        continue;
      }
      for (const auto& [child, label] :
           {std::pair{in.true_child, "true_child"}, std::pair{in.false_child, "false_child"}}) {
        if (!child) {
          flag(l, k, std::string("missing ") + label);
        } else if (*child >= model.levels[l + 1].size()) {
          flag(l, k, std::string(label) + " index out of range");
        } else {
          ++parents[l + 1][*child];
        }
      }
    }
  }
  for (std::size_t l = 1; l < depth; ++l) {
    for (std::size_t k = 0; k < parents[l].size(); ++k) {
      if (parents[l][k] == 0) flag(l, k, "node " + Describe(l, k) + " is unreachable");
      if (parents[l][k] > 1) flag(l, k, "node " + Describe(l, k) + " has several parents");
    }
  }
  return out;
}

FeatureVector EncodeFeatureVector(const AttributeSchema& schema,
                                  const std::map<std::string, std::string>& raw,
                                  int t) {
  const std::uint64_t limit = std::uint64_t{1} << t;
  FeatureVector fv;
  fv.reserve(schema.attributes.size());
  for (const Attribute& attr : schema.attributes) {
    auto it = raw.find(attr.name);
    if (it == raw.end()) {
      throw Error(ErrorCode::kEncoding, "missing attribute '" + attr.name + "'");
    }
    const std::string& value = it->second;
    if (attr.kind == AttributeKind::kCategorical) {
      auto code = attr.encoding.find(value);
      if (code == attr.encoding.end()) {
        throw Error(ErrorCode::kEncoding,
                    "unknown category '" + value + "' for '" + attr.name + "'");
      }
      fv.push_back(code->second);
      continue;
    }
    std::uint64_t v = 0;
    const char* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec == std::errc::result_out_of_range) {
      throw Error(ErrorCode::kRange, "value for '" + attr.name + "' out of range");
    }
    if (ec != std::errc() || ptr != end || value.empty()) {
      throw Error(ErrorCode::kEncoding,
                  "value '" + value + "' for '" + attr.name + "' is not a non-negative integer");
    }
    if (v >= limit) {
      throw Error(ErrorCode::kRange,
                  "value for '" + attr.name + "' does not fit in t bits");
    }
    fv.push_back(v);
  }
  return fv;
}

Classification PlaintextClassify(const TreeModel& model, const FeatureVector& fv) {
  std::size_t index = 0;
  for (std::size_t l = 0; l < model.levels.size(); ++l) {
    const TreeNode& node = model.levels[l].at(index);
    if (const auto* leaf = std::get_if<LeafNode>(&node)) return {leaf->class_id, l};
    const auto& in = std::get<InternalNode>(node);
    const std::uint64_t x = fv.at(in.attribute);
    const bool beta = in.mode == CompareMode::kNumeric ? in.threshold <= x
                                                        : in.threshold == x;
    index = beta ? *in.true_child : *in.false_child;
  }
  throw Error(ErrorCode::kParameter, "walk fell off the last level");
}

DepthStats ComputeDepthStats(const TreeModel& model,
                             const std::vector<FeatureVector>& dataset) {
  if (dataset.empty()) throw Error(ErrorCode::kParameter, "empty dataset");
  std::vector<std::size_t> levels;
  levels.reserve(dataset.size());
  for (const FeatureVector& fv : dataset) {
    levels.push_back(PlaintextClassify(model, fv).termination_level);
  }
  std::sort(levels.begin(), levels.end());
  const std::size_t n = levels.size();
  DepthStats stats;
  stats.size = n;
  stats.average = static_cast<double>(std::accumulate(levels.begin(), levels.end(), std::size_t{0})) /
                  static_cast<double>(n);
  stats.median = levels[NearestRank(n, 1, 2) - 1];
  stats.third_quartile = levels[NearestRank(n, 3, 4) - 1];
  stats.max = levels.back();
  return stats;
}

}  // namespace ppdt::tree
