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

#include "ppdt/tree/io.hpp"

#include <json.hpp>

#include <string>

#include "ppdt/errors.hpp"

namespace ppdt::tree {

namespace {

using nlohmann::json;

[[noreturn]] void Bad(const std::string& what) {
  throw Error(ErrorCode::kDecode, "tree file: " + what);
}

std::uint64_t AsUint(const json& j, const char* what) {
  if (!j.is_number_unsigned()) Bad(std::string(what) + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) Bad(std::string("missing '") + key + "'");
  return *it;
}

AttributeSchema SchemaFromJson(const json& j) {
  if (!j.is_object()) Bad("schema must be an object");
  AttributeSchema schema;
  const json& attrs = Require(j, "attributes");
  if (!attrs.is_array()) Bad("attributes must be an array");
  for (const json& a : attrs) {
    if (!a.is_object()) Bad("attribute must be an object");
    Attribute attr;
    const json& name = Require(a, "name");
    if (!name.is_string()) Bad("attribute name must be a string");
    attr.name = name.get<std::string>();
    const json& kind = Require(a, "kind");
    if (kind == "numeric") {
      attr.kind = AttributeKind::kNumeric;
    } else if (kind == "categorical") {
      attr.kind = AttributeKind::kCategorical;
    } else {
      Bad("attribute kind must be numeric or categorical");
    }
    if (auto enc = a.find("encoding"); enc != a.end()) {
      if (!enc->is_object()) Bad("encoding must be an object");
      for (const auto& [category, code] : enc->items()) {
        attr.encoding[category] = AsUint(code, "category code");
      }
    }
    schema.attributes.push_back(std::move(attr));
  }
  const json& classes = Require(j, "classes");
  if (!classes.is_array()) Bad("classes must be an array");
  for (const json& c : classes) {
    if (!c.is_string()) Bad("class labels must be strings");
    schema.classes.push_back(c.get<std::string>());
  }
  return schema;
}

json SchemaToJson(const AttributeSchema& schema) {
  json attrs = json::array();
  for (const Attribute& attr : schema.attributes) {
    json a = {{"name", attr.name},
              {"kind", attr.kind == AttributeKind::kNumeric ? "numeric" : "categorical"}};
    if (attr.kind == AttributeKind::kCategorical) {
      json enc = json::object();
      for (const auto& [category, code] : attr.encoding) enc[category] = code;
      a["encoding"] = enc;
    }
    attrs.push_back(std::move(a));
  }
  return {{"attributes", attrs}, {"classes", schema.classes}};
}

json Parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    Bad(e.what());
  }
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> SplitCommas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

TreeModel ParseTree(std::string_view json_text) {
  const json j = Parse(json_text);
  if (!j.is_object()) Bad("top level must be an object");
  TreeModel model;
  model.schema = SchemaFromJson(Require(j, "schema"));
  const json& levels = Require(j, "levels");
  if (!levels.is_array()) Bad("levels must be an array");
  for (const json& level : levels) {
    if (!level.is_array()) Bad("each level must be an array");
    std::vector<TreeNode> nodes;
    for (const json& n : level) {
      if (!n.is_object()) Bad("node must be an object");
      if (auto leaf = n.find("leaf"); leaf != n.end()) {
        nodes.push_back(LeafNode{AsUint(*leaf, "leaf")});
        continue;
      }
      InternalNode in;
      in.attribute = AsUint(Require(n, "attr"), "attr");
      in.threshold = AsUint(Require(n, "threshold"), "threshold");
      const json& mode = Require(n, "mode");
      if (!mode.is_string()) Bad("mode must be a string");
      try {
        in.mode = compare::ParseMode(mode.get<std::string>());
      } catch (const Error& e) {
        Bad(e.what());
      }
      if (auto c = n.find("true_child"); c != n.end()) in.true_child = AsUint(*c, "true_child");
      if (auto c = n.find("false_child"); c != n.end()) in.false_child = AsUint(*c, "false_child");
      nodes.push_back(in);
    }
    model.levels.push_back(std::move(nodes));
  }
  return model;
}

std::string SerializeTree(const TreeModel& model) {
  json levels = json::array();
  for (const auto& level : model.levels) {
    json nodes = json::array();
    for (const TreeNode& node : level) {
      if (const auto* leaf = std::get_if<LeafNode>(&node)) {
        nodes.push_back({{"leaf", leaf->class_id}});
        continue;
      }
      const auto& in = std::get<InternalNode>(node);
      json n = {{"attr", in.attribute},
                {"threshold", in.threshold},
                {"mode", std::string(compare::ModeName(in.mode))}};
      if (in.true_child) n["true_child"] = *in.true_child;
      if (in.false_child) n["false_child"] = *in.false_child;
      nodes.push_back(std::move(n));
    }
    levels.push_back(std::move(nodes));
  }
  json j = {{"schema", SchemaToJson(model.schema)}, {"levels", levels}};
  return j.dump(2) + "\n";
}

AttributeSchema ParseSchema(std::string_view json_text) {
  return SchemaFromJson(Parse(json_text));
}

std::string SerializeSchema(const AttributeSchema& schema) {
  return SchemaToJson(schema).dump(2) + "\n";
}

std::vector<RawRecord> ParseCsv(std::string_view text) {
  std::vector<std::string> header;
  std::vector<RawRecord> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fields = SplitCommas(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kDecode, "dataset line " + std::to_string(line_no) +
                                          ": expected " + std::to_string(header.size()) +
                                          " fields");
    }
    RawRecord row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw Error(ErrorCode::kDecode, "dataset: missing header row");
  return rows;
}

RawRecord ParseRecordArg(std::string_view text) {
  RawRecord record;
  for (const std::string& pair : SplitCommas(text)) {
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kDecode, "record field '" + pair + "' lacks '='");
    }
    record[Trim(std::string_view(pair).substr(0, eq))] =
        Trim(std::string_view(pair).substr(eq + 1));
  }
  return record;
}

}  // namespace ppdt::tree
