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

#ifndef PPDT_TREE_IO_HPP_
#define PPDT_TREE_IO_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ppdt/tree/model.hpp"

namespace ppdt::tree {

// Tree file:
//   {"schema": {"attributes": [{"name": .., "kind": "numeric"|"categorical",
//                               "encoding": {category: code, ..}}, ..],
//               "classes": [label, ..]},
//    "levels": [[node, ..], ..]}
// where a node is {"leaf": class_index} or
//   {"attr": i, "threshold": n, "mode": "numeric"|"equality",
//    "true_child": j, "false_child": k}.
// Structural problems (bad children, wrong modes) are left for ValidateTree;
// syntax and type errors throw Error(kDecode).
TreeModel ParseTree(std::string_view json_text);
std::string SerializeTree(const TreeModel& model);

// The public part handed to clients: attribute encodings and class labels.
AttributeSchema ParseSchema(std::string_view json_text);
std::string SerializeSchema(const AttributeSchema& schema);

using RawRecord = std::map<std::string, std::string>;

// Header row of attribute names, then one comma-separated record per line.
// Blank lines are skipped; surrounding whitespace is trimmed.
std::vector<RawRecord> ParseCsv(std::string_view text);

// "name=value,name=value" as accepted on the command line.
RawRecord ParseRecordArg(std::string_view text);

}  // namespace ppdt::tree

#endif  // PPDT_TREE_IO_HPP_
