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

#ifndef PPDT_HARNESS_SYNTH_HPP_
#define PPDT_HARNESS_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ppdt/tree/model.hpp"

namespace ppdt::harness {

struct RandomTreeOptions {
  // Number of levels; leaves are forced on the last one.
  std::size_t max_levels = 8;
  std::size_t numeric_attributes = 3;
  std::size_t categorical_attributes = 2;
  std::size_t categories_per_attribute = 4;
  std::size_t classes = 3;
  // Numeric values and thresholds are drawn from [0, value_limit).
  std::uint64_t value_limit = 64;
  // Chance that a non-root node above the last level becomes a leaf.
  double leaf_probability = 0.25;
};

// A random valid tree mixing numeric and categorical splits.
tree::TreeModel RandomTree(const RandomTreeOptions& options);

// Feature vector with values drawn the same way RandomTree draws thresholds,
// so both branches of every node are exercised.
tree::FeatureVector RandomFeatureVector(const tree::TreeModel& model,
                                        const RandomTreeOptions& options);

// Tall sparse tree with levels 0..edges: the spine node at level l routes
// x_0 >= l+1 further down and everything else to a leaf on level l+1, so a
// query with x_0 = L-1 terminates exactly at level L.
tree::TreeModel SpineTree(std::size_t edges);

// Inverts the plaintext path: finds a feature vector whose walk ends at some
// leaf on `level`, or nullopt if no leaf there is reachable. Ties are taken on
// the inclusive boundary (x = T) whenever a numeric branch goes true.
std::optional<tree::FeatureVector> SynthesizeForLevel(const tree::TreeModel& model,
                                                      std::size_t level, int t);

}  // namespace ppdt::harness

#endif  // PPDT_HARNESS_SYNTH_HPP_
