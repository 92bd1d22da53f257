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

// ppdt: command-line front end for keys, partitioning, level-site daemons,
// classification and the benchmark.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ppdt/errors.hpp"
#include "ppdt/file_io.hpp"
#include "ppdt/harness/bench.hpp"
#include "ppdt/harness/client.hpp"
#include "ppdt/harness/synth.hpp"
#include "ppdt/harness/topology.hpp"
#include "ppdt/he/keys.hpp"
#include "ppdt/levelsite/site.hpp"
#include "ppdt/tree/io.hpp"
#include "ppdt/tree/slice.hpp"
#include "ppdt/wire/files.hpp"
#include "ppdt/wire/transport.hpp"

namespace fs = std::filesystem;
using namespace ppdt;

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kFile = 2,
  kNetworkExit = 3,
  kProtocolExit = 4,
  kDecodeExit = 5,
};

int ExitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return kFile;
    case ErrorCode::kNetwork:
      return kNetworkExit;
    case ErrorCode::kProtocol:
      return kProtocolExit;
    case ErrorCode::kDecode:
      return kDecodeExit;
    default:
      return kUsage;
  }
}

double MsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

he::ProtocolParams ParamsFor(int bits, int t, int kappa) {
  he::ProtocolParams p;
  p.paillier_bits = bits;
  p.dgk_bits = bits;
  p.t = t;
  p.kappa = kappa;
  p.Validate();
  return p;
}

tree::TreeModel LoadTree(const std::string& path) {
  tree::TreeModel model = tree::ParseTree(ReadFileText(path));
  return model;
}

void RequireValid(const tree::TreeModel& model, int t) {
  auto vs = tree::ValidateTree(model, t);
  if (vs.empty()) return;
  std::string msg = "invalid tree:";
  for (const auto& v : vs) {
    msg += "\n  level " + std::to_string(v.level) + " node " + std::to_string(v.index) + ": " +
           v.what;
  }
  throw Error(ErrorCode::kParameter, msg);
}

std::vector<tree::FeatureVector> LoadRecords(const tree::AttributeSchema& schema,
                                             const std::string& record,
                                             const std::string& data, int t) {
  std::vector<tree::RawRecord> raw;
  if (!record.empty()) raw.push_back(tree::ParseRecordArg(record));
  if (!data.empty()) {
    auto rows = tree::ParseCsv(ReadFileText(data));
    raw.insert(raw.end(), rows.begin(), rows.end());
  }
  if (raw.empty()) throw Error(ErrorCode::kParameter, "give --record or --data");
  std::vector<tree::FeatureVector> out;
  for (const auto& r : raw) out.push_back(tree::EncodeFeatureVector(schema, r, t));
  return out;
}

// ---- subcommands ----------------------------------------------------------

struct KeygenArgs {
  std::string out_dir = ".";
  int bits = 2048;
  int t = 32;
  int kappa = 40;
};

int RunKeygen(const KeygenArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  he::ClientKeys keys = he::GenerateClientKeys(ParamsFor(a.bits, a.t, a.kappa));
  const double ms = MsSince(t0);
  fs::create_directories(a.out_dir);
  wire::WriteKeyMaterialFile(fs::path(a.out_dir) / "client.pub", keys.Public());
  WriteFileBytes(fs::path(a.out_dir) / "client.key", he::SerializeClientKeys(keys));
  std::printf("wrote %s/client.pub and %s/client.key\n", a.out_dir.c_str(), a.out_dir.c_str());
  std::printf("fingerprint %016llx, keygen %.1f ms\n",
              static_cast<unsigned long long>(keys.Public().Fingerprint()), ms);
  return kOk;
}

struct PartitionArgs {
  std::string tree;
  std::string pub;
  std::string out_dir = ".";
};

int RunPartition(const PartitionArgs& a) {
  auto model = LoadTree(a.tree);
  auto keys = wire::ReadKeyMaterialFile(a.pub);
  RequireValid(model, keys.params.t);
  auto slices = tree::PartitionAndEncrypt(model, keys);
  fs::create_directories(a.out_dir);
  for (const auto& s : slices) {
    wire::WriteSliceFile(fs::path(a.out_dir) / ("level_" + std::to_string(s.level) + ".slice"), s);
  }
  WriteFileText(fs::path(a.out_dir) / "schema.json", tree::SerializeSchema(model.schema));
  std::printf("wrote %zu slice files and schema.json to %s\n", slices.size(), a.out_dir.c_str());
  return kOk;
}

struct DeployArgs {
  std::string slices_dir = ".";
  std::string endpoints;
};

int RunDeploy(const DeployArgs& a) {
  auto endpoints = SplitList(a.endpoints);
  if (endpoints.empty()) throw Error(ErrorCode::kParameter, "no endpoints given");
  std::vector<tree::LevelSlice> slices;
  for (std::size_t l = 0; l < endpoints.size(); ++l) {
    slices.push_back(
        wire::ReadSliceFile(fs::path(a.slices_dir) / ("level_" + std::to_string(l) + ".slice")));
  }
  if (slices.front().depth != endpoints.size()) {
    throw Error(ErrorCode::kParameter, "tree has " + std::to_string(slices.front().depth) +
                                           " levels but " + std::to_string(endpoints.size()) +
                                           " endpoints were given");
  }
  auto net = wire::MakeTcpNetwork();
  harness::DeploySlices(*net, slices, endpoints);
  for (std::size_t l = 0; l < endpoints.size(); ++l) {
    std::printf("level %zu -> %s: installed\n", l, endpoints[l].c_str());
  }
  return kOk;
}

struct LevelsiteArgs {
  std::size_t level = 0;
  std::string listen = "0.0.0.0:7000";
  std::string downstream;
  std::uint32_t pad_min_ms = 0;
  std::uint32_t pad_max_ms = 0;
  bool bogus = false;
  std::string slice;
};

int RunLevelsite(const LevelsiteArgs& a) {
  // Signals are taken synchronously below; block them before any thread starts.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  levelsite::SiteConfig cfg;
  cfg.level = a.level;
  if (!a.downstream.empty()) cfg.downstream = a.downstream;
  if (a.pad_max_ms > 0) cfg.pad_response = levelsite::PaddingRange{a.pad_min_ms, a.pad_max_ms};
  cfg.bogus_continuation = a.bogus;
  if (!a.slice.empty()) cfg.slice = wire::ReadSliceFile(a.slice);
  auto net = wire::MakeTcpNetwork();
  levelsite::LevelSite site(*net, cfg);
  site.Start(a.listen);
  std::printf("level-site %zu listening on %s\n", a.level, site.endpoint().c_str());
  std::fflush(stdout);
  int sig = 0;
  sigwait(&set, &sig);
  site.Stop();
  return kOk;
}

struct ClassifyArgs {
  std::string key;
  std::string schema;
  std::string tree;
  std::string entry;
  std::string listen = "127.0.0.1:0";
  std::string record;
  std::string data;
};

int RunClassify(const ClassifyArgs& a) {
  std::optional<he::ClientKeys> keys;
  if (!a.key.empty()) keys = he::ParseClientKeys(ReadFileBytes(a.key));
  if (!a.tree.empty()) {
    // Everything in this process over the simulated transport.
    auto model = LoadTree(a.tree);
    if (!keys) keys = he::GenerateClientKeys(he::TestParams());
    RequireValid(model, keys->params.t);
    harness::Topology topo(model, *keys, {});
    for (const auto& fv : LoadRecords(model.schema, a.record, a.data, keys->params.t)) {
      std::printf("%s\n", model.schema.classes.at(topo.Classify(fv).class_id).c_str());
    }
    return kOk;
  }
  if (!keys) throw Error(ErrorCode::kParameter, "--key is required without --tree");
  if (a.schema.empty() || a.entry.empty()) {
    throw Error(ErrorCode::kParameter, "--schema and --entry are required without --tree");
  }
  auto schema = tree::ParseSchema(ReadFileText(a.schema));
  auto net = wire::MakeTcpNetwork();
  harness::Client client(*net, *keys);
  client.Start(a.listen);
  for (const auto& fv : LoadRecords(schema, a.record, a.data, keys->params.t)) {
    auto r = client.Classify(fv, a.entry);
    if (r.class_id >= schema.classes.size()) {
      throw Error(ErrorCode::kProtocol, "class id " + std::to_string(r.class_id) + " not in schema");
    }
    std::printf("%s\n", schema.classes[r.class_id].c_str());
  }
  return kOk;
}

struct OracleArgs {
  std::string tree;
  std::string record;
  std::string data;
  int t = 32;
};

int RunOracle(const OracleArgs& a) {
  auto model = LoadTree(a.tree);
  RequireValid(model, a.t);
  for (const auto& fv : LoadRecords(model.schema, a.record, a.data, a.t)) {
    auto c = tree::PlaintextClassify(model, fv);
    std::printf("%s level=%zu\n", model.schema.classes.at(c.class_id).c_str(),
                c.termination_level);
  }
  return kOk;
}

int RunDepthStats(const OracleArgs& a) {
  auto model = LoadTree(a.tree);
  RequireValid(model, a.t);
  auto rows = LoadRecords(model.schema, "", a.data, a.t);
  std::fputs(harness::FormatDepthStats(tree::ComputeDepthStats(model, rows)).c_str(), stdout);
  return kOk;
}

struct BenchArgs {
  std::string tree;
  std::size_t spine = 12;
  std::string levels = "2,4,9,12";
  std::size_t runs = 10;
  int hop_delay_ms = 25;
  std::string transport = "sim";
  bool bogus = false;
  int bits = 512;
  int t = 32;
  std::string csv;
};

int RunBench(const BenchArgs& a) {
  auto model = a.tree.empty() ? harness::SpineTree(a.spine) : LoadTree(a.tree);
  std::vector<std::size_t> levels;
  for (const auto& s : SplitList(a.levels)) levels.push_back(std::stoul(s));
  const auto t0 = std::chrono::steady_clock::now();
  auto keys = he::GenerateClientKeys(ParamsFor(a.bits, a.t, 40));
  const double keygen_ms = MsSince(t0);
  RequireValid(model, a.t);
  harness::TopologyOptions opt;
  if (a.transport == "tcp") {
    opt.transport = harness::TransportKind::kTcp;
  } else if (a.transport != "sim") {
    throw Error(ErrorCode::kParameter, "--transport is sim or tcp");
  }
  opt.hop_delay = std::chrono::milliseconds(a.hop_delay_ms);
  opt.bogus_continuation = a.bogus;
  harness::Topology topo(model, keys, opt);
  auto report = harness::BenchLatency(topo, model, levels, a.runs);
  report.keygen_ms = keygen_ms;
  if (!a.csv.empty()) WriteFileText(a.csv, report.Csv());
  std::fputs(report.Summary().c_str(), stdout);
  return report.error ? kNetworkExit : kOk;
}

struct ProtocolTestArgs {
  int t = 4;
  int bits = 512;
};

int RunProtocolTestCmd(const ProtocolTestArgs& a) {
  auto keys = he::GenerateClientKeys(ParamsFor(a.bits, a.t, 40));
  auto r = harness::RunProtocolTest(keys, a.t);
  std::printf("t=%d numeric %zu/%zu equality %zu/%zu\n", r.t, r.numeric_ok, r.numeric_total,
              r.equality_ok, r.equality_total);
  return r.passed() ? kOk : kProtocolExit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Privacy-preserving decision tree inference with level-sites"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 ok, 1 usage or parameter, 2 file, 3 network, 4 protocol, 5 decode");

  KeygenArgs keygen;
  auto* c_keygen = app.add_subcommand("keygen", "Generate the client's Paillier and DGK keys");
  c_keygen->add_option("--out-dir", keygen.out_dir, "Directory for client.pub and client.key");
  c_keygen->add_option("--bits", keygen.bits, "Modulus size (512 is for tests)")
      ->check(CLI::IsMember({512, 1024, 2048, 3072}));
  c_keygen->add_option("--t", keygen.t, "Bit length of attribute values");
  c_keygen->add_option("--kappa", keygen.kappa, "Statistical masking bits");

  PartitionArgs partition;
  auto* c_partition = app.add_subcommand("partition", "Encrypt a tree and split it per level");
  c_partition->add_option("--tree", partition.tree, "Tree JSON")->required();
  c_partition->add_option("--pub", partition.pub, "Client public key file")->required();
  c_partition->add_option("--out-dir", partition.out_dir, "Where level_<l>.slice files go");

  DeployArgs deploy;
  auto* c_deploy = app.add_subcommand("deploy", "Install slice files on running level-sites");
  c_deploy->add_option("--slices-dir", deploy.slices_dir, "Directory holding level_<l>.slice");
  c_deploy->add_option("--endpoints", deploy.endpoints, "host:port per level, comma separated")
      ->envname("PPDT_ENDPOINTS")
      ->required();

  LevelsiteArgs site;
  auto* c_site = app.add_subcommand("levelsite", "Run one level-site daemon");
  // Read by the root app; keys go under a [levelsite] section.
  app.set_config("--config", "", "Config file for levelsite ([levelsite] section)");
  c_site->fallthrough();
  c_site->add_option("--level", site.level, "Tree level served")->required();
  c_site->add_option("--listen", site.listen, "host:port to listen on");
  c_site->add_option("--downstream", site.downstream, "host:port of the next level");
  c_site->add_option("--pad-min-ms", site.pad_min_ms, "Lower bound of response padding");
  c_site->add_option("--pad-max-ms", site.pad_max_ms, "Upper bound of response padding");
  c_site->add_flag("--bogus-continuation", site.bogus, "Keep forwarding after a leaf");
  c_site->add_option("--slice", site.slice, "Slice file to install at start");

  ClassifyArgs classify;
  auto* c_classify = app.add_subcommand("classify", "Classify records");
  c_classify->add_option("--key", classify.key, "Client private key file");
  c_classify->add_option("--schema", classify.schema, "schema.json from partition");
  c_classify->add_option("--entry", classify.entry, "Level-site 0 endpoint")->envname("PPDT_ENTRY");
  c_classify->add_option("--listen", classify.listen, "Client callback endpoint")
      ->envname("PPDT_CLIENT_LISTEN");
  c_classify->add_option("--tree", classify.tree, "Run all roles in-process on this tree");
  c_classify->add_option("--record", classify.record, "name=value,... for one record");
  c_classify->add_option("--data", classify.data, "CSV file of records");

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Plaintext classification");
  c_oracle->add_option("--tree", oracle.tree, "Tree JSON")->required();
  c_oracle->add_option("--record", oracle.record, "name=value,... for one record");
  c_oracle->add_option("--data", oracle.data, "CSV file of records");
  c_oracle->add_option("--t", oracle.t, "Bit length of attribute values");

  OracleArgs stats;
  auto* c_stats = app.add_subcommand("depth-stats", "Termination depth statistics of a dataset");
  c_stats->add_option("--tree", stats.tree, "Tree JSON")->required();
  c_stats->add_option("--data", stats.data, "CSV file of records")->required();
  c_stats->add_option("--t", stats.t, "Bit length of attribute values");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Latency per termination level");
  c_bench->add_option("--tree", bench.tree, "Tree JSON (default: a spine tree)");
  c_bench->add_option("--spine", bench.spine, "Edges of the default spine tree");
  c_bench->add_option("--levels", bench.levels, "Termination levels, comma separated");
  c_bench->add_option("--runs", bench.runs, "Queries per level");
  c_bench->add_option("--hop-delay-ms", bench.hop_delay_ms, "Delay added to every frame (sim)");
  c_bench->add_option("--transport", bench.transport, "sim or tcp");
  c_bench->add_flag("--bogus-continuation", bench.bogus, "Full-depth traffic");
  c_bench->add_option("--bits", bench.bits, "Key size")->check(CLI::IsMember({512, 1024, 2048, 3072}));
  c_bench->add_option("--t", bench.t, "Bit length of attribute values");
  c_bench->add_option("--csv", bench.csv, "Write per-query records here");

  ProtocolTestArgs ptest;
  auto* c_ptest = app.add_subcommand("protocol-test", "Exhaustive comparison check");
  c_ptest->add_option("--t", ptest.t, "Bit length (<= 8)");
  c_ptest->add_option("--bits", ptest.bits, "Key size")->check(CLI::IsMember({512, 1024, 2048, 3072}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (dynamic_cast<const CLI::FileError*>(&e)) return kFile;
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*c_keygen) return RunKeygen(keygen);
    if (*c_partition) return RunPartition(partition);
    if (*c_deploy) return RunDeploy(deploy);
    if (*c_site) return RunLevelsite(site);
    if (*c_classify) return RunClassify(classify);
    if (*c_oracle) return RunOracle(oracle);
    if (*c_stats) return RunDepthStats(stats);
    if (*c_bench) return RunBench(bench);
    if (*c_ptest) return RunProtocolTestCmd(ptest);
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "ppdt: io error: %s\n", e.what());
    return kFile;
  } catch (const Error& e) {
    std::fprintf(stderr, "ppdt: %s error: %s\n", std::string(ErrorCodeName(e.code())).c_str(),
                 e.what());
    return ExitFor(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ppdt: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
