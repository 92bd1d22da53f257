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

#include "ppdt/harness/synth.hpp"

#include <set>
#include <string>

#include "ppdt/he/bigint.hpp"

namespace ppdt::harness {

namespace {

using tree::AttributeKind;
using tree::CompareMode;
using tree::InternalNode;
using tree::LeafNode;
using tree::TreeModel;

double Uniform01() {
  return static_cast<double>(RandomU64() >> 11) * (1.0 / 9007199254740992.0);
}

std::size_t Pick(std::size_t n) {
  return static_cast<std::size_t>(RandomBelow(std::uint64_t{n}));
}

// Appends the subtree rooted at `level` and returns its index there.
std::size_t Grow(TreeModel& model, const RandomTreeOptions& opt, std::size_t level) {
  auto& nodes = model.levels[level];
  const std::size_t index = nodes.size();
  const bool last = level + 1 == opt.max_levels;
  if (last || (level > 0 && Uniform01() < opt.leaf_probability)) {
    nodes.push_back(LeafNode{Pick(model.schema.classes.size())});
    return index;
  }
  nodes.push_back(LeafNode{});  // placeholder keeps the index stable
  InternalNode in;
  in.attribute = Pick(model.schema.attributes.size());
  const auto& attr = model.schema.attributes[in.attribute];
  if (attr.kind == AttributeKind::kNumeric) {
    in.mode = CompareMode::kNumeric;
    in.threshold = RandomBelow(opt.value_limit);
  } else {
    in.mode = CompareMode::kEquality;
    in.threshold = Pick(opt.categories_per_attribute);
  }
  in.true_child = Grow(model, opt, level + 1);
  in.false_child = Grow(model, opt, level + 1);
  model.levels[level][index] = in;
  return index;
}

struct Constraint {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::optional<std::uint64_t> equal;
  std::set<std::uint64_t> excluded;
};

bool Feasible(const Constraint& c) {
  if (c.lo > c.hi) return false;
  if (c.equal) return *c.equal >= c.lo && *c.equal <= c.hi && !c.excluded.contains(*c.equal);
  return true;
}

std::uint64_t Choose(const Constraint& c, const tree::Attribute& attr) {
  if (c.equal) return *c.equal;
  if (attr.kind == AttributeKind::kCategorical) {
    for (const auto& [name, code] : attr.encoding) {
      if (code >= c.lo && code <= c.hi && !c.excluded.contains(code)) return code;
    }
  }
  for (std::uint64_t v = c.lo; v <= c.hi; ++v) {
    if (!c.excluded.contains(v)) return v;
  }
  return c.lo;
}

bool Search(const TreeModel& model, std::size_t level, std::size_t index,
            std::size_t target, std::vector<Constraint>& cs,
            tree::FeatureVector& out) {
  const auto& node = model.levels[level][index];
  if (std::holds_alternative<LeafNode>(node)) {
    if (level != target) return false;
    out.resize(cs.size());
    for (std::size_t a = 0; a < cs.size(); ++a) {
      out[a] = Choose(cs[a], model.schema.attributes[a]);
    }
    return true;
  }
  if (level >= target) return false;
  const auto& in = std::get<InternalNode>(node);
  for (bool branch : {true, false}) {
    Constraint saved = cs[in.attribute];
    Constraint& c = cs[in.attribute];
    if (in.mode == CompareMode::kNumeric) {
      if (branch) {
        c.lo = std::max(c.lo, in.threshold);
      } else if (in.threshold == 0) {
        // x < 0 is impossible.
        c.lo = 1;
        c.hi = 0;
      } else {
        c.hi = std::min(c.hi, in.threshold - 1);
      }
    } else if (branch) {
      if (c.equal && *c.equal != in.threshold) {
        c.lo = 1;
        c.hi = 0;
      }
      c.equal = in.threshold;
    } else {
      c.excluded.insert(in.threshold);
    }
    if (Feasible(c) &&
        Search(model, level + 1, branch ? *in.true_child : *in.false_child, target, cs, out)) {
      return true;
    }
    cs[in.attribute] = std::move(saved);
  }
  return false;
}

}  // namespace

TreeModel RandomTree(const RandomTreeOptions& opt) {
  TreeModel model;
  for (std::size_t i = 0; i < opt.numeric_attributes; ++i) {
    model.schema.attributes.push_back({"num" + std::to_string(i), AttributeKind::kNumeric, {}});
  }
  for (std::size_t i = 0; i < opt.categorical_attributes; ++i) {
    tree::Attribute attr{"cat" + std::to_string(i), AttributeKind::kCategorical, {}};
    for (std::size_t c = 0; c < opt.categories_per_attribute; ++c) {
      attr.encoding["c" + std::to_string(i) + "_" + std::to_string(c)] = c;
    }
    model.schema.attributes.push_back(std::move(attr));
  }
  for (std::size_t c = 0; c < opt.classes; ++c) {
    model.schema.classes.push_back("class" + std::to_string(c));
  }
  model.levels.resize(opt.max_levels);
  Grow(model, opt, 0);
  while (!model.levels.empty() && model.levels.back().empty()) model.levels.pop_back();
  return model;
}

tree::FeatureVector RandomFeatureVector(const TreeModel& model,
                                        const RandomTreeOptions& opt) {
  tree::FeatureVector fv;
  for (const auto& attr : model.schema.attributes) {
    fv.push_back(attr.kind == AttributeKind::kNumeric
                     ? RandomBelow(opt.value_limit)
                     : static_cast<std::uint64_t>(Pick(attr.encoding.size())));
  }
  return fv;
}

TreeModel SpineTree(std::size_t edges) {
  TreeModel model;
  model.schema.attributes.push_back({"x", AttributeKind::kNumeric, {}});
  for (std::size_t l = 0; l <= edges; ++l) {
    model.schema.classes.push_back("level" + std::to_string(l));
  }
  model.levels.resize(edges + 1);
  for (std::size_t l = 0; l < edges; ++l) {
    // Level l+1 holds [false leaf, spine continuation or final leaf].
    model.levels[l].push_back(InternalNode{0, l + 1, CompareMode::kNumeric, 1, 0});
    model.levels[l + 1].push_back(LeafNode{l + 1});
  }
  if (edges == 0) {
    model.levels[0].push_back(LeafNode{0});
  } else {
    model.levels[edges].push_back(LeafNode{edges});
  }
  return model;
}

std::optional<tree::FeatureVector> SynthesizeForLevel(const TreeModel& model,
                                                      std::size_t level, int t) {
  if (model.levels.empty() || level >= model.levels.size()) return std::nullopt;
  std::vector<Constraint> cs(model.schema.attributes.size());
  for (auto& c : cs) c.hi = (std::uint64_t{1} << t) - 1;
  tree::FeatureVector out;
  if (!Search(model, 0, 0, level, cs, out)) return std::nullopt;
  return out;
}

}  // namespace ppdt::harness
