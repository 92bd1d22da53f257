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

#include "ppdt/harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "ppdt/compare/session.hpp"
#include "ppdt/errors.hpp"
#include "ppdt/harness/synth.hpp"

namespace ppdt::harness {

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::optional<LevelAggregate> BenchReport::ForLevel(std::size_t level) const {
  for (const auto& a : aggregates) {
    if (a.level == level) return a;
  }
  return std::nullopt;
}

void BenchReport::Aggregate() {
  std::map<std::size_t, std::vector<double>> by_level;
  for (const auto& r : records) by_level[r.termination_level].push_back(r.wall_ms);
  aggregates.clear();
  for (auto& [level, ms] : by_level) {
    std::sort(ms.begin(), ms.end());
    LevelAggregate a;
    a.level = level;
    a.runs = ms.size();
    for (double m : ms) a.mean_ms += m / static_cast<double>(ms.size());
    const std::size_t n = ms.size();
    a.median_ms = n % 2 ? ms[n / 2] : (ms[n / 2 - 1] + ms[n / 2]) / 2;
    aggregates.push_back(a);
  }
}

std::string BenchReport::Csv() const {
  std::ostringstream out;
  out << "termination_level,wall_ms,hop_count,comparison_count,label_ok\n";
  for (const auto& r : records) {
    out << r.termination_level << ',' << Fixed(r.wall_ms, 3) << ',' << r.hop_count << ','
        << r.comparison_count << ',' << (r.label_ok ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string BenchReport::Summary() const {
  std::ostringstream out;
  out << "# Relative latency only: ratios between termination levels and their\n"
         "# monotone trend are meaningful; absolute times depend on this machine.\n";
  out << "t=" << t << " kappa=" << kappa << " paillier_bits=" << paillier_bits
      << " dgk_bits=" << dgk_bits << " transport=" << transport
      << " hop_delay_ms=" << Fixed(hop_delay_ms, 1)
      << " bogus_continuation=" << (bogus_continuation ? "on" : "off") << '\n';
  out << "keygen_ms=" << Fixed(keygen_ms, 1) << " (not part of any query time)\n";
  out << "level  runs  mean_ms    median_ms  ratio_to_deepest\n";
  const double deepest = aggregates.empty() ? 0 : aggregates.back().mean_ms;
  for (const auto& a : aggregates) {
    char line[128];
    std::snprintf(line, sizeof line, "%5zu  %4zu  %9.2f  %9.2f  %6.3f\n", a.level, a.runs,
                  a.mean_ms, a.median_ms, deepest > 0 ? a.mean_ms / deepest : 0.0);
    out << line;
  }
  const auto bad = std::count_if(records.begin(), records.end(),
                                 [](const BenchRecord& r) { return !r.label_ok; });
  out << "label mismatches: " << bad << " of " << records.size() << '\n';
  if (error) out << "ABORTED: " << *error << '\n';
  return out.str();
}

BenchReport BenchLatency(Topology& topology, const tree::TreeModel& model,
                         const std::vector<std::size_t>& levels, std::size_t runs) {
  const auto& params = topology.client().keys().params;
  BenchReport report;
  report.t = params.t;
  report.kappa = params.kappa;
  report.paillier_bits = static_cast<int>(topology.client().keys().paillier.public_key.bits());
  report.dgk_bits = static_cast<int>(topology.client().keys().dgk.public_key.bits());
  report.hop_delay_ms = static_cast<double>(topology.options().hop_delay.count());
  report.bogus_continuation = topology.options().bogus_continuation;
  report.transport =
      topology.options().transport == TransportKind::kSimulated ? "simulated" : "tcp";

  std::vector<std::pair<std::size_t, tree::FeatureVector>> queries;
  for (std::size_t level : levels) {
    auto fv = SynthesizeForLevel(model, level, params.t);
    if (!fv) {
      throw Error(ErrorCode::kParameter, "no query terminates at level " + std::to_string(level));
    }
    queries.emplace_back(level, *fv);
  }
  try {
    for (const auto& [level, fv] : queries) {
      const auto expected = tree::PlaintextClassify(model, fv);
      for (std::size_t i = 0; i < runs; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        ClientResult r = topology.Classify(fv);
        const auto t1 = std::chrono::steady_clock::now();
        auto trace = topology.WaitTrace(r.session);
        BenchRecord rec;
        rec.termination_level = level;
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rec.hop_count = trace.forwards;
        rec.comparison_count = trace.comparisons;
        rec.label_ok = r.class_id == expected.class_id &&
                       trace.reply_level == expected.termination_level;
        report.records.push_back(rec);
      }
    }
  } catch (const Error& e) {
    report.error = e.what();
  }
  report.Aggregate();
  return report;
}

ProtocolTestResult RunProtocolTest(const he::ClientKeys& keys, int t) {
  if (t != keys.params.t) {
    throw Error(ErrorCode::kParameter, "keys were made for t=" + std::to_string(keys.params.t));
  }
  if (t > 8) throw Error(ErrorCode::kParameter, "exhaustive test is limited to t <= 8");
  ProtocolTestResult res;
  res.t = t;
  const std::uint64_t n = std::uint64_t{1} << t;
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t thr = 0; thr < n; ++thr) {
      auto num = compare::RunLocalComparison(keys, x, thr, compare::CompareMode::kNumeric);
      res.numeric_ok += num.beta == (thr <= x ? 1 : 0);
      ++res.numeric_total;
      auto eq = compare::RunLocalComparison(keys, x, thr, compare::CompareMode::kEquality);
      res.equality_ok += eq.beta == (thr == x ? 1 : 0);
      ++res.equality_total;
    }
  }
  return res;
}

std::string FormatDepthStats(const tree::DepthStats& s) {
  std::ostringstream out;
  out << "average  median  third_quartile  max  size\n";
  char line[96];
  std::snprintf(line, sizeof line, "%7.2f  %6zu  %14zu  %3zu  %zu\n", s.average, s.median,
                s.third_quartile, s.max, s.size);
  out << line;
  return out.str();
}

}  // namespace ppdt::harness
