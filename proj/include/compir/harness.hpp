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

#ifndef COMPIR_HARNESS_HPP_
#define COMPIR_HARNESS_HPP_

// Verifiability experiment against scripted adversaries, benchmark sweeps
// and operation-count audits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compir/compir.hpp"

namespace compir {

// ---------------------------------------------------------------- experiment

enum class Strategy : std::uint8_t {
  kTamperData,         // add a nonzero delta to one data answer scalar
  kTamperHash,         // add a nonzero delta to one hash answer
  kTamperWitness,      // replace one witness by a random G2 point
  kWrongDbConsistent,  // answer honestly over x' != x (target item changed)
  kReplay,             // answer a stale query honestly
  kRandomAll,          // one of the above, drawn per server and trial
};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
std::vector<Strategy> all_strategies();

struct ExperimentConfig {
  SchemeParams params;
  std::size_t m = 1;
  std::size_t index = 1;              // 1-based target
  std::vector<std::size_t> corrupt;   // 0-based server ids
  Strategy strategy = Strategy::kTamperData;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
};

enum class Outcome : std::uint8_t {
  kExp1,     // client accepted a wrong item
  kBottom,   // client rejected
  kCorrect,  // client accepted the right item
  kNoop,     // every corrupted bundle equalled the honest one
};

struct ExperimentTally {
  std::size_t exp1 = 0;
  std::size_t bottom = 0;
  std::size_t correct = 0;
  std::size_t noop = 0;
  // Trials with a real tamper that still ended in the correct item.
  std::size_t tampered_accepted = 0;
  // Hash/witness tampers where the rejected set was not exactly B.
  std::size_t verdict_mismatch = 0;
  // SHA3-256 over every bundle and outcome, for determinism checks.
  std::array<std::uint8_t, 32> transcript{};

  std::size_t trials() const { return exp1 + bottom + correct + noop; }
  ExperimentTally& operator+=(const ExperimentTally& o);
};

// Throws std::invalid_argument on an invalid config.
ExperimentTally run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- bench

struct BenchGrid {
  std::vector<SchemeId> schemes;
  std::vector<std::size_t> ks;
  // t values; t <= 0 means k + t, so -1 stands for k-1.
  std::vector<long> ts;
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ms;
  // wy only: override d (0 keeps floor((2k-1)/t)).
  std::vector<std::size_t> wy_degrees{0};
  std::size_t repetitions = 5;
  std::size_t warmup = 1;
  std::uint64_t seed = 1;
  // Cells whose estimated footprint exceeds this are skipped.
  std::size_t memory_limit = 0;  // 0: half of available memory

  // TOML keys: schemes, k, t, n, m, wy_d, repetitions, warmup, seed,
  // memory_limit_mb.
  static BenchGrid load(const std::filesystem::path& path);
  static BenchGrid parse(std::string_view toml_text);
};

struct BenchCell {
  SchemeParams params;
  std::size_t m = 0;
};

// Phases: query, answer, witness, verify, extract, total. Server phases
// are summed over the k servers.
struct BenchRow {
  SchemeParams params;
  std::size_t m = 0;
  std::string phase;
  std::size_t bytes_up = 0;
  std::size_t bytes_down = 0;
  std::int64_t nanos = 0;  // median
};

std::vector<BenchCell> expand_grid(const BenchGrid& grid);
std::size_t estimate_cell_bytes(const BenchCell& cell);

// Runs one cell; rows in phase order.
std::vector<BenchRow> bench_cell(const BenchCell& cell, std::size_t repetitions,
                                 std::size_t warmup, std::uint64_t seed);

// Skipped cells are reported on `log` when non-null.
std::vector<BenchRow> bench_sweep(const BenchGrid& grid, std::ostream* log = nullptr);

constexpr std::string_view kBenchCsvHeader = "scheme,k,t,n,m,phase,bytes_up,bytes_down,nanos";
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

// ---------------------------------------------------------------- audit

struct OpTally {
  std::uint64_t field_add = 0;
  std::uint64_t field_mul = 0;
  std::uint64_t group_add = 0;
  std::uint64_t group_mul = 0;
  std::uint64_t pairings = 0;
};

OpTally tally_of(const OpCounters& c);

struct CostLine {
  std::string role;  // server-data, server-verification, client-data, client-verification
  OpTally measured;
  OpTally predicted;  // big-O expression at unit constants
  std::string formula;
};

struct CostReport {
  SchemeParams params;
  std::size_t m = 0;
  std::vector<CostLine> lines;
  // Query body bits summed over servers, and the predicted value.
  std::uint64_t upload_bits = 0;
  std::uint64_t predicted_upload_bits = 0;
  // Retrieved data bytes / data answer bytes downloaded (payload level).
  double download_rate = 0;
  double predicted_download_rate = 0;
};

// Instrumented honest retrieval. Server lines are for a single server.
CostReport cost_audit(const SchemeParams& params, std::size_t m, std::uint64_t seed = 7);
void print_cost_report(std::ostream& out, const CostReport& r);

}  // namespace compir

#endif  // COMPIR_HARNESS_HPP_
