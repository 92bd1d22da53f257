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

#ifndef PPDT_HARNESS_BENCH_HPP_
#define PPDT_HARNESS_BENCH_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ppdt/harness/topology.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/tree/model.hpp"

namespace ppdt::harness {

struct BenchRecord {
  std::size_t termination_level = 0;
  double wall_ms = 0;
  std::size_t hop_count = 0;
  std::size_t comparison_count = 0;
  bool label_ok = false;  // matched the plaintext walk
};

struct LevelAggregate {
  std::size_t level = 0;
  std::size_t runs = 0;
  double mean_ms = 0;
  double median_ms = 0;
};

struct BenchReport {
  // Config echo.
  int t = 0;
  int kappa = 0;
  int paillier_bits = 0;
  int dgk_bits = 0;
  double hop_delay_ms = 0;
  bool bogus_continuation = false;
  std::string transport;
  // Client key generation, kept out of every per-query time.
  double keygen_ms = 0;

  std::vector<BenchRecord> records;
  std::vector<LevelAggregate> aggregates;
  // Set when the run stopped early; records hold what finished.
  std::optional<std::string> error;

  std::optional<LevelAggregate> ForLevel(std::size_t level) const;
  void Aggregate();
  std::string Csv() const;
  std::string Summary() const;
};

// Runs `runs` sequential queries per target level; each query is a vector
// synthesized to stop at that level. Throws Error(kParameter) if a level has
// no reachable leaf.
BenchReport BenchLatency(Topology& topology, const tree::TreeModel& model,
                         const std::vector<std::size_t>& levels, std::size_t runs);

// Exhaustive comparison check over all t-bit pairs, both modes.
struct ProtocolTestResult {
  int t = 0;
  std::size_t numeric_ok = 0, numeric_total = 0;
  std::size_t equality_ok = 0, equality_total = 0;
  bool passed() const {
    return numeric_ok == numeric_total && equality_ok == equality_total;
  }
};
ProtocolTestResult RunProtocolTest(const he::ClientKeys& keys, int t);

// The five columns: average, median, third quartile, max, dataset size.
std::string FormatDepthStats(const tree::DepthStats& stats);

}  // namespace ppdt::harness

#endif  // PPDT_HARNESS_BENCH_HPP_
