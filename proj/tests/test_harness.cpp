// Copyright 2026 The compir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "compir/harness.hpp"

namespace compir {
namespace {

std::vector<SchemeParams> sample_params() {
  return {SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4),
          SchemeParams::make(SchemeId::kCkgsK, 3, 2, 4),
          SchemeParams::make(SchemeId::kWy, 3, 1, 4),
          SchemeParams::make(SchemeId::kBe, 3, 2, 4)};
}

ExperimentConfig config(const SchemeParams& p, Strategy s, std::vector<std::size_t> corrupt,
                        std::size_t trials, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.params = p;
  c.m = 2;
  c.index = 3;
  c.corrupt = std::move(corrupt);
  c.strategy = s;
  c.trials = trials;
  c.seed = seed;
  return c;
}

TEST(Strategies, Names) {
  EXPECT_EQ(all_strategies().size(), 6u);
  for (auto s : all_strategies()) EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  EXPECT_FALSE(parse_strategy("nope").has_value());
}

TEST(Experiment, NoCorruptServersAlwaysCorrect) {
  for (const auto& p : sample_params()) {
    const auto t = run_experiment(config(p, Strategy::kRandomAll, {}, 4));
    EXPECT_EQ(t.correct, 4u);
    EXPECT_EQ(t.trials(), 4u);
    EXPECT_EQ(t.exp1, 0u);
  }
}

TEST(Experiment, EveryStrategyRejectedOnOneServer) {
  for (const auto& p : sample_params()) {
    for (auto s : all_strategies()) {
      const auto t = run_experiment(config(p, s, {0}, 3));
      EXPECT_EQ(t.exp1, 0u) << scheme_name(p.scheme) << " " << strategy_name(s);
      EXPECT_EQ(t.tampered_accepted, 0u) << scheme_name(p.scheme) << " " << strategy_name(s);
      EXPECT_EQ(t.verdict_mismatch, 0u) << scheme_name(p.scheme) << " " << strategy_name(s);
      EXPECT_EQ(t.bottom + t.noop, 3u) << scheme_name(p.scheme) << " " << strategy_name(s);
    }
  }
}

TEST(Experiment, AllServersConsistentlyWrong) {
  for (const auto& p : sample_params()) {
    std::vector<std::size_t> everyone;
    for (std::size_t j = 0; j < p.k; ++j) everyone.push_back(j);
    const auto t = run_experiment(config(p, Strategy::kWrongDbConsistent, everyone, 3));
    EXPECT_EQ(t.exp1, 0u);
    EXPECT_EQ(t.bottom, 3u) << scheme_name(p.scheme);
  }
}

TEST(Experiment, Deterministic) {
  const auto p = SchemeParams::make(SchemeId::kBe, 3, 1, 4);
  const auto a = run_experiment(config(p, Strategy::kRandomAll, {0, 2}, 5, 9));
  const auto b = run_experiment(config(p, Strategy::kRandomAll, {0, 2}, 5, 9));
  const auto c = run_experiment(config(p, Strategy::kRandomAll, {0, 2}, 5, 10));
  EXPECT_EQ(a.transcript, b.transcript);
  EXPECT_EQ(a.bottom, b.bottom);
  EXPECT_NE(a.transcript, c.transcript);
}

TEST(Experiment, InvalidConfig) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4);
  EXPECT_THROW(run_experiment(config(p, Strategy::kTamperData, {2}, 1)), std::invalid_argument);
  auto c = config(p, Strategy::kTamperData, {0}, 1);
  c.index = 5;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Experiment, TallyAddition) {
  ExperimentTally a, b;
  a.exp1 = 1;
  a.bottom = 2;
  b.correct = 3;
  b.noop = 4;
  b.tampered_accepted = 5;
  a += b;
  EXPECT_EQ(a.trials(), 10u);
  EXPECT_EQ(a.tampered_accepted, 5u);
}

TEST(BenchGrid, ParseAndExpand) {
  const auto g = BenchGrid::parse(R"(
schemes = ["ckgs2", "ckgsk", "wy", "be"]
k = [2, 3]
t = [1, -1]
n = [8]
m = [1, 4]
wy_d = [0, 2]
repetitions = 3
warmup = 0
seed = 5
memory_limit_mb = 64
)");
  EXPECT_EQ(g.repetitions, 3u);
  EXPECT_EQ(g.warmup, 0u);
  EXPECT_EQ(g.seed, 5u);
  EXPECT_EQ(g.memory_limit, std::size_t{64} << 20);
  const auto cells = expand_grid(g);
  // Per m: ckgs2 1; ckgsk k=2,3 -> 2; wy (2,1) d=3,2 + (3,1) d=5,2 + (3,2) d=2 -> 5;
  // be (2,1), (3,1), (3,2) -> 3.
  EXPECT_EQ(cells.size(), 2u * (1 + 2 + 5 + 3));
  std::size_t wy_reduced = 0;
  for (const auto& c : cells) {
    if (c.params.scheme == SchemeId::kWy && c.params.d == 2) ++wy_reduced;
  }
  EXPECT_EQ(wy_reduced, 2u * 3u);
}

TEST(BenchGrid, Rejects) {
  EXPECT_THROW(BenchGrid::parse("schemes = [\"zz\"]\nk=[2]\nn=[4]\nm=[1]"), std::exception);
  EXPECT_THROW(BenchGrid::parse("schemes = ["), std::exception);
}

TEST(BenchGrid, ShippedGridsLoad) {
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(COMPIR_GRID_DIR)) {
    if (e.path().extension() != ".toml") continue;
    ++files;
    const auto g = BenchGrid::load(e.path());
    EXPECT_FALSE(expand_grid(g).empty()) << e.path();
  }
  EXPECT_GE(files, 1u);
}

TEST(Bench, CellSmoke) {
  const BenchCell cell{SchemeParams::make(SchemeId::kBe, 3, 1, 4), 2};
  const auto rows = bench_cell(cell, 2, 0, 1);
  ASSERT_EQ(rows.size(), 6u);
  const std::vector<std::string> phases = {"query", "answer", "witness", "verify", "extract",
                                           "total"};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].phase, phases[i]);
    EXPECT_GE(rows[i].nanos, 0);
  }
  EXPECT_GT(rows[5].nanos, 0);
  EXPECT_GT(rows[5].bytes_up, 0u);
  EXPECT_GT(rows[5].bytes_down, 0u);
  EXPECT_GT(estimate_cell_bytes(cell), 0u);
}

TEST(Bench, CsvOutput) {
  const BenchCell cell{SchemeParams::make(SchemeId::kWy, 2, 1, 4).with_wy_degree(2), 1};
  const auto rows = bench_cell(cell, 1, 0, 1);
  std::ostringstream out;
  write_bench_csv(out, rows);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kBenchCsvHeader);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("wy-d2,2,1,4,1,query,", 0), 0u) << line;
  std::size_t lines = 1;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 6u);
}

TEST(Bench, SweepSkipsOversizedCells) {
  BenchGrid g;
  g.schemes = {SchemeId::kCkgs2};
  g.ks = {2};
  g.ts = {1};
  g.ns = {4, 1 << 20};
  g.ms = {1 << 12};
  g.repetitions = 1;
  g.warmup = 0;
  g.memory_limit = std::size_t{8} << 20;
  std::ostringstream log;
  const auto rows = bench_sweep(g, &log);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].params.n, 4u);
  EXPECT_NE(log.str().find("skip ckgs2 k=2 t=1 n=1048576"), std::string::npos) << log.str();
}

TEST(Audit, TwoServerCounts) {
  const auto r = cost_audit(SchemeParams::make(SchemeId::kCkgs2, 2, 1, 64), 4);
  EXPECT_EQ(r.upload_bits, 128u);
  EXPECT_EQ(r.predicted_upload_bits, 128u);
  EXPECT_DOUBLE_EQ(r.download_rate, 0.5);
  EXPECT_DOUBLE_EQ(r.predicted_download_rate, 0.5);
  ASSERT_EQ(r.lines.size(), 4u);
  const auto& cv = r.lines[3];
  EXPECT_EQ(cv.role, "client-verification");
  EXPECT_EQ(cv.measured.pairings, 6u);
  std::ostringstream out;
  print_cost_report(out, r);
  EXPECT_NE(out.str().find("upload bits 128"), std::string::npos);
}

TEST(Audit, BlockRate) {
  const auto r = cost_audit(SchemeParams::make(SchemeId::kBe, 4, 1, 8), 2);
  EXPECT_DOUBLE_EQ(r.download_rate, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.predicted_download_rate, 3.0 / 4.0);
  EXPECT_EQ(r.upload_bits, 4u * 24u * 256u);
}

}  // namespace
}  // namespace compir
