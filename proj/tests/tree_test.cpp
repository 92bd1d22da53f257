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

#include <gtest/gtest.h>

#include <json.hpp>

#include <algorithm>
#include <string>

#include "ppdt/errors.hpp"
#include "ppdt/harness/synth.hpp"
#include "ppdt/tree/io.hpp"
#include "ppdt/tree/model.hpp"
#include "ppdt/tree/slice.hpp"
#include "test_support.hpp"

namespace ppdt::tree {
namespace {

using ppdt::testing::TestKeys;

TreeModel StumpTree(std::uint64_t threshold) {
  TreeModel m;
  m.schema.attributes.push_back({"age", AttributeKind::kNumeric, {}});
  m.schema.classes = {"no", "yes"};
  m.levels = {{InternalNode{0, threshold, CompareMode::kNumeric, 1, 0}},
              {LeafNode{0}, LeafNode{1}}};
  return m;
}

TreeModel LeafOnly(std::size_t class_id) {
  TreeModel m;
  m.schema.classes = {"a", "b", "c", "d"};
  m.levels = {{LeafNode{class_id}}};
  return m;
}

bool HasViolationAt(const std::vector<Violation>& vs, std::size_t l, std::size_t k,
                    const std::string& needle) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.level == l && v.index == k && v.what.find(needle) != std::string::npos;
  });
}

// Second walker over the serialized JSON form, sharing no code with
// PlaintextClassify.
std::pair<std::size_t, std::size_t> JsonWalk(const nlohmann::json& j,
                                             const FeatureVector& fv) {
  std::size_t idx = 0;
  const auto& levels = j.at("levels");
  for (std::size_t l = 0;; ++l) {
    const auto& n = levels.at(l).at(idx);
    if (n.contains("leaf")) return {n.at("leaf").get<std::size_t>(), l};
    const std::uint64_t x = fv.at(n.at("attr").get<std::size_t>());
    const std::uint64_t thr = n.at("threshold").get<std::uint64_t>();
    bool go_true = n.at("mode") == "numeric" ? !(x < thr) : (x == thr);
    idx = n.at(go_true ? "true_child" : "false_child").get<std::size_t>();
  }
}

TEST(ValidateTree, SingleLeafIsValid) {
  EXPECT_TRUE(ValidateTree(LeafOnly(3), 32).empty());
}

TEST(ValidateTree, MissingFalseChild) {
  TreeModel m = StumpTree(5);
  std::get<InternalNode>(m.levels[0][0]).false_child.reset();
  auto vs = ValidateTree(m, 32);
  EXPECT_TRUE(HasViolationAt(vs, 0, 0, "missing false_child"));
}

TEST(ValidateTree, RandomDepthEightTreesAreValid) {
  harness::RandomTreeOptions opt;
  for (int i = 0; i < 25; ++i) {
    TreeModel m = harness::RandomTree(opt);
    EXPECT_LE(m.depth(), 8u);
    auto vs = ValidateTree(m, 32);
    EXPECT_TRUE(vs.empty()) << vs.front().what;
  }
}

TEST(ValidateTree, ReportsEachKindOfViolation) {
  {
    TreeModel m = StumpTree(5);
    m.levels[0].push_back(LeafNode{0});
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 0, 0, "exactly one node"));
  }
  {
    TreeModel m = StumpTree(5);
    std::get<InternalNode>(m.levels[0][0]).true_child = 7;
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 0, 0, "out of range"));
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 1, 1, "unreachable"));
  }
  {
    TreeModel m = StumpTree(5);
    std::get<InternalNode>(m.levels[0][0]).mode = CompareMode::kEquality;
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 0, 0, "equality comparison on a numeric"));
  }
  {
    TreeModel m = StumpTree(5);
    m.levels[1][1] = InternalNode{0, 1, CompareMode::kNumeric, 0, 0};
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 1, 1, "last level"));
  }
  {
    TreeModel m = StumpTree(16);
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 4), 0, 0, "t bits"));
    EXPECT_TRUE(ValidateTree(m, 5).empty());
  }
  {
    TreeModel m = StumpTree(5);
    m.levels[1][0] = LeafNode{9};
    EXPECT_TRUE(HasViolationAt(ValidateTree(m, 32), 1, 0, "class id"));
  }
  {
    TreeModel m = StumpTree(5);
    m.schema.attributes.push_back({"color", AttributeKind::kCategorical, {{"red", 1}, {"blue", 1}}});
    EXPECT_FALSE(ValidateTree(m, 32).empty());
  }
  {
    TreeModel m = StumpTree(5);
    std::get<InternalNode>(m.levels[0][0]).true_child = 0;
    auto vs = ValidateTree(m, 32);
    EXPECT_TRUE(HasViolationAt(vs, 1, 0, "several parents"));
  }
  {
    TreeModel m;
    EXPECT_FALSE(ValidateTree(m, 32).empty());
  }
}

TEST(EncodeFeatureVector, NumericAndCategorical) {
  AttributeSchema numeric{{{"age", AttributeKind::kNumeric, {}}}, {"x"}};
  EXPECT_EQ(EncodeFeatureVector(numeric, {{"age", "40"}}, 32), (FeatureVector{40}));
  AttributeSchema cat{{{"parents", AttributeKind::kCategorical,
                        {{"great_pret", 0}, {"pretentious", 1}, {"usual", 2}}}},
                      {"x"}};
  EXPECT_EQ(EncodeFeatureVector(cat, {{"parents", "usual"}}, 32), (FeatureVector{2}));
}

TEST(EncodeFeatureVector, NurseryStyleRecordRoundTrips) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> columns = {
      {"parents", {"usual", "pretentious", "great_pret"}},
      {"has_nurs", {"proper", "less_proper", "improper", "critical", "very_crit"}},
      {"form", {"complete", "completed", "incomplete", "foster"}},
      {"children", {"1", "2", "3", "more"}},
      {"housing", {"convenient", "less_conv", "critical"}},
      {"finance", {"convenient", "inconv"}},
      {"social", {"nonprob", "slightly_prob", "problematic"}},
      {"health", {"recommended", "priority", "not_recom"}}};
  AttributeSchema schema;
  schema.classes = {"not_recom", "recommend", "very_recom", "priority", "spec_prior"};
  for (const auto& [name, cats] : columns) {
    Attribute a{name, AttributeKind::kCategorical, {}};
    for (std::size_t i = 0; i < cats.size(); ++i) a.encoding[cats[i]] = i;
    schema.attributes.push_back(a);
  }
  RawRecord record;
  for (const auto& [name, cats] : columns) record[name] = cats.back();
  FeatureVector fv = EncodeFeatureVector(schema, record, 4);
  ASSERT_EQ(fv.size(), 8u);
  for (std::size_t i = 0; i < fv.size(); ++i) {
    EXPECT_LT(fv[i], 16u);
    const auto& enc = schema.attributes[i].encoding;
    auto back = std::find_if(enc.begin(), enc.end(),
                             [&](const auto& kv) { return kv.second == fv[i]; });
    ASSERT_NE(back, enc.end());
    EXPECT_EQ(back->first, record[schema.attributes[i].name]);
  }
}

TEST(EncodeFeatureVector, Errors) {
  AttributeSchema schema{{{"age", AttributeKind::kNumeric, {}},
                          {"color", AttributeKind::kCategorical, {{"red", 0}}}},
                         {"x"}};
  auto code = [&](const RawRecord& r) {
    try {
      EncodeFeatureVector(schema, r, 8);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code({{"age", "1"}, {"color", "green"}}), ErrorCode::kEncoding);
  EXPECT_EQ(code({{"age", "256"}, {"color", "red"}}), ErrorCode::kRange);
  EXPECT_EQ(code({{"age", "-1"}, {"color", "red"}}), ErrorCode::kEncoding);
  EXPECT_EQ(code({{"age", "4.5"}, {"color", "red"}}), ErrorCode::kEncoding);
  EXPECT_EQ(code({{"color", "red"}}), ErrorCode::kEncoding);
  EXPECT_EQ(EncodeFeatureVector(schema, {{"age", "255"}, {"color", "red"}}, 8),
            (FeatureVector{255, 0}));
}

TEST(PlaintextClassify, WorkedExamples) {
  EXPECT_EQ(PlaintextClassify(LeafOnly(3), {}), (Classification{3, 0}));
  EXPECT_EQ(PlaintextClassify(StumpTree(5), {5}), (Classification{1, 1}));
  EXPECT_EQ(PlaintextClassify(StumpTree(5), {4}), (Classification{0, 1}));
}

TEST(PlaintextClassify, AgreesWithIndependentWalker) {
  harness::RandomTreeOptions opt;
  for (int tree_i = 0; tree_i < 5; ++tree_i) {
    TreeModel m = harness::RandomTree(opt);
    auto j = nlohmann::json::parse(SerializeTree(m));
    for (int i = 0; i < 100; ++i) {
      FeatureVector fv = harness::RandomFeatureVector(m, opt);
      auto got = PlaintextClassify(m, fv);
      auto [cls, level] = JsonWalk(j, fv);
      ASSERT_EQ(got.class_id, cls);
      ASSERT_EQ(got.termination_level, level);
      ASSERT_EQ(PlaintextClassify(m, fv), got);  // deterministic
    }
  }
}

TEST(PartitionAndEncrypt, LeafAndThresholdEncodings) {
  auto keys = TestKeys();
  const auto& sk = keys.paillier.private_key;
  const auto& pk = keys.paillier.public_key;
  auto slices = PartitionAndEncrypt(LeafOnly(2), keys.Public());
  ASSERT_EQ(slices.size(), 1u);
  ASSERT_EQ(slices[0].nodes.size(), 1u);
  EXPECT_EQ(sk.Decrypt(std::get<EncLeaf>(slices[0].nodes[0]).enc_class), 2);

  auto stump = PartitionAndEncrypt(StumpTree(5), keys.Public());
  const auto& root = std::get<EncInternal>(stump[0].nodes[0]);
  EXPECT_EQ(pk.DecodeSigned(sk.Decrypt(root.enc_neg_threshold)), -5);
  EXPECT_EQ(stump[0].fingerprint(), keys.Public().Fingerprint());
}

TEST(PartitionAndEncrypt, DecryptionReconstructsRandomTrees) {
  auto keys = TestKeys();
  const auto& sk = keys.paillier.private_key;
  const auto& pk = keys.paillier.public_key;
  harness::RandomTreeOptions opt;
  for (int i = 0; i < 3; ++i) {
    TreeModel m = harness::RandomTree(opt);
    auto slices = PartitionAndEncrypt(m, keys.Public());
    ASSERT_EQ(slices.size(), m.depth());
    TreeModel rebuilt;
    rebuilt.schema = m.schema;
    for (std::size_t l = 0; l < slices.size(); ++l) {
      EXPECT_EQ(slices[l].level, l);
      EXPECT_EQ(slices[l].depth, m.depth());
      ASSERT_EQ(slices[l].nodes.size(), m.levels[l].size());
      std::vector<TreeNode> level;
      for (const SliceNode& n : slices[l].nodes) {
        if (const auto* leaf = std::get_if<EncLeaf>(&n)) {
          level.push_back(LeafNode{sk.Decrypt(leaf->enc_class).get_ui()});
        } else {
          const auto& in = std::get<EncInternal>(n);
          mpz_class neg = pk.DecodeSigned(sk.Decrypt(in.enc_neg_threshold));
          level.push_back(InternalNode{in.attribute, mpz_class(-neg).get_ui(), in.mode,
                                       in.true_child, in.false_child});
        }
      }
      rebuilt.levels.push_back(std::move(level));
    }
    EXPECT_EQ(rebuilt, m);
  }
}

TEST(PartitionAndEncrypt, FreshRandomnessPerCiphertext) {
  auto keys = TestKeys();
  TreeModel m = StumpTree(5);
  std::get<LeafNode>(m.levels[1][1]).class_id = 0;
  auto slices = PartitionAndEncrypt(m, keys.Public());
  EXPECT_NE(std::get<EncLeaf>(slices[1].nodes[0]).enc_class,
            std::get<EncLeaf>(slices[1].nodes[1]).enc_class);
}

TEST(PartitionAndEncrypt, RejectsInvalidTreesAndMismatchedParams) {
  auto keys = TestKeys();
  TreeModel bad = StumpTree(5);
  std::get<InternalNode>(bad.levels[0][0]).false_child.reset();
  EXPECT_THROW(PartitionAndEncrypt(bad, keys.Public()), Error);
  auto material = keys.Public();
  material.params.dgk_plaintext_space = 65539;
  try {
    PartitionAndEncrypt(StumpTree(5), material);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParameter);
  }
}

TEST(DepthStats, HandComputedNearestRank) {
  TreeModel spine = harness::SpineTree(3);
  // x = L - 1 ends at level L.
  auto stats = ComputeDepthStats(spine, {{0}, {1}, {1}, {2}});
  EXPECT_EQ(stats, (DepthStats{2.0, 2, 2, 3, 4}));
}

TEST(DepthStats, ConstantAndBounds) {
  TreeModel spine = harness::SpineTree(5);
  std::vector<FeatureVector> rows(7, FeatureVector{4});
  EXPECT_EQ(ComputeDepthStats(spine, rows), (DepthStats{5.0, 5, 5, 5, 7}));
  EXPECT_THROW(ComputeDepthStats(spine, {}), Error);

  harness::RandomTreeOptions opt;
  TreeModel m = harness::RandomTree(opt);
  std::vector<FeatureVector> data;
  for (int i = 0; i < 200; ++i) data.push_back(harness::RandomFeatureVector(m, opt));
  auto s = ComputeDepthStats(m, data);
  EXPECT_LE(s.max, m.depth() - 1);
  EXPECT_LE(s.average, static_cast<double>(s.max));
  EXPECT_LE(s.median, s.third_quartile);
}

TEST(DepthStats, CompleteTreeTerminatesOnLastLevel) {
  harness::RandomTreeOptions opt;
  opt.leaf_probability = 0.0;
  opt.max_levels = 5;
  TreeModel m = harness::RandomTree(opt);
  ASSERT_EQ(m.levels.back().size(), 16u);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(PlaintextClassify(m, harness::RandomFeatureVector(m, opt)).termination_level, 4u);
  }
}

TEST(TreeFile, RoundTripAndErrors) {
  harness::RandomTreeOptions opt;
  TreeModel m = harness::RandomTree(opt);
  EXPECT_EQ(ParseTree(SerializeTree(m)), m);
  EXPECT_EQ(ParseSchema(SerializeSchema(m.schema)), m.schema);

  const char* text = R"({"schema":{"attributes":[{"name":"age","kind":"numeric"}],
    "classes":["no","yes"]},"levels":[[{"attr":0,"threshold":5,"mode":"numeric",
    "true_child":1}],[{"leaf":0},{"leaf":1}]]})";
  TreeModel partial = ParseTree(text);
  EXPECT_TRUE(HasViolationAt(ValidateTree(partial, 32), 0, 0, "missing false_child"));

  for (const char* broken : {"", "[]", R"({"schema":{}})",
                             R"({"schema":{"attributes":[],"classes":[]},"levels":[[{"attr":-1}]]})",
                             R"({"schema":{"attributes":[],"classes":[]},"levels":[[{"attr":0,"threshold":1,"mode":"less"}]]})"}) {
    try {
      ParseTree(broken);
      ADD_FAILURE() << broken;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDecode);
    }
  }
}

TEST(Dataset, CsvAndRecordArguments) {
  auto rows = ParseCsv("age, color\n40,red\n\n 7 ,blue \n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].at("age"), "7");
  EXPECT_EQ(rows[1].at("color"), "blue");
  EXPECT_THROW(ParseCsv("a,b\n1\n"), Error);
  EXPECT_THROW(ParseCsv("\n\n"), Error);
  auto rec = ParseRecordArg("age=40, parents=usual");
  EXPECT_EQ(rec.at("parents"), "usual");
  EXPECT_THROW(ParseRecordArg("age"), Error);
}

TEST(Synthesis, SpineTreeTerminatesWhereAsked) {
  TreeModel spine = harness::SpineTree(12);
  EXPECT_EQ(spine.depth(), 13u);
  EXPECT_TRUE(ValidateTree(spine, 32).empty());
  EXPECT_FALSE(harness::SynthesizeForLevel(spine, 0, 32).has_value());
  for (std::size_t level = 1; level <= 12; ++level) {
    auto fv = harness::SynthesizeForLevel(spine, level, 32);
    ASSERT_TRUE(fv.has_value());
    EXPECT_EQ(PlaintextClassify(spine, *fv).termination_level, level);
  }
}

TEST(Synthesis, RandomTreesReachEveryLeafLevel) {
  harness::RandomTreeOptions opt;
  for (int i = 0; i < 10; ++i) {
    TreeModel m = harness::RandomTree(opt);
    for (std::size_t level = 0; level < m.depth(); ++level) {
      auto fv = harness::SynthesizeForLevel(m, level, 32);
      if (fv) EXPECT_EQ(PlaintextClassify(m, *fv).termination_level, level);
    }
    // Every vector the plaintext walker produces marks a reachable level.
    for (int k = 0; k < 50; ++k) {
      auto level = PlaintextClassify(m, harness::RandomFeatureVector(m, opt)).termination_level;
      EXPECT_TRUE(harness::SynthesizeForLevel(m, level, 32).has_value());
    }
  }
}

}  // namespace
}  // namespace ppdt::tree
