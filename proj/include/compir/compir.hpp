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

#ifndef COMPIR_COMPIR_HPP_
#define COMPIR_COMPIR_HPP_

// Committed PIR: any linear scheme from pir.hpp run twice per query, once
// on the database and once on its column hashes, with the hash answers
// opened against a commitment to the hash vector.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "compir/datahash.hpp"
#include "compir/lmc.hpp"
#include "compir/pir.hpp"

namespace compir {

enum class WitnessMode : std::uint8_t { kPerCombination = 0, kBatched = 1 };

// Batched for wy, one witness per combination otherwise (L = 1 there).
WitnessMode default_witness_mode(SchemeId scheme);

struct AnswerBundle {
  Answer data;                      // L x m
  std::vector<Scalar> hashes;       // L
  WitnessMode mode = WitnessMode::kPerCombination;
  std::vector<Witness> witnesses;   // L, or 1 when batched

  bool operator==(const AnswerBundle&) const = default;
};

enum class Verdict : std::uint8_t { kAccepted, kRejected, kUnreachable, kMalformed };

std::string_view verdict_name(Verdict v);

struct RetrievalResult {
  std::optional<Item> item;  // nullopt is the rejection output
  std::vector<Verdict> verdicts;
  // All servers verified but the retrieved data did not hash to the
  // certified value.
  bool hash_mismatch = false;

  bool ok() const { return item.has_value(); }
};

// LMC over params.columns() hashes.
PublicParams compir_setup(const SchemeParams& params, Rng& entropy);

// Throws std::invalid_argument when db.cols() != pp.n().
Commitment compir_commit(const PublicParams& pp, const Database& db);
Commitment compir_commit_hashes(const PublicParams& pp, std::span<const Scalar> h);

// Server state: the database, its hashes and commitment, computed once.
// The scheme arrives with each query; `pinned`, when set, is the only
// scheme the server accepts.
class ServerContext {
 public:
  ServerContext(const PublicParams& pp, const Database& db,
                std::optional<SchemeParams> pinned = std::nullopt);

  const PublicParams& pp() const { return *pp_; }
  const Database& db() const { return *db_; }
  std::span<const Scalar> hashes() const { return h_; }
  const Commitment& commitment() const { return com_; }
  const std::optional<SchemeParams>& pinned() const { return pinned_; }

  // Whether queries under `params` can be answered from this database.
  bool accepts(const SchemeParams& params) const;

 private:
  const PublicParams* pp_;
  const Database* db_;
  std::vector<Scalar> h_;
  Commitment com_;
  std::optional<SchemeParams> pinned_;
};

// Witnesses opening `hash_answers[u]` = coeffs[u] . h.
std::vector<Witness> compir_witnesses(const PublicParams& pp, std::span<const Scalar> h,
                                      const Commitment& com,
                                      std::span<const std::vector<Scalar>> coeffs,
                                      std::span<const Scalar> hash_answers,
                                      WitnessMode mode);

// Throws std::invalid_argument when !ctx.accepts(params).
AnswerBundle compir_answer(const ServerContext& ctx, const SchemeParams& params,
                           const Query& q, WitnessMode mode);
inline AnswerBundle compir_answer(const ServerContext& ctx, const SchemeParams& params,
                                  const Query& q) {
  return compir_answer(ctx, params, q, default_witness_mode(params.scheme));
}

// Shape check plus LMC verification of one server's bundle.
Verdict verify_bundle(const SchemeParams& params, const PublicParams& pp,
                      const Commitment& com, std::size_t m, const Query& q,
                      const AnswerBundle& bundle);

struct ExtractOptions {
  // Verify servers on separate threads. Operation counters of the workers
  // are added to the calling thread.
  bool parallel = false;
};

// m is the item size in scalars. Every server is checked even after a
// failure so that the verdicts are complete.
RetrievalResult compir_extract(const SchemeParams& params, const PublicParams& pp,
                               const Commitment& com, std::size_t m, std::size_t index,
                               std::span<const Query> queries,
                               std::span<const AnswerBundle> bundles, const Aux& aux,
                               ExtractOptions opts = {});

// Reconstruction and final hash check on already-verified bundles.
RetrievalResult compir_decode(const SchemeParams& params, std::size_t index,
                              std::span<const AnswerBundle> bundles, const Aux& aux);

// Commitment file contents: the deployment parameters and the point.
struct CommitmentRecord {
  SchemeParams params;
  std::size_t m = 0;
  Commitment com;

  // "CPCM" | version u8 | scheme u8 | k u8 | t u8 | n u32 | m u32 | 48B.
  Bytes serialize() const;
  static CommitmentRecord deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static CommitmentRecord load(const std::filesystem::path& path);
};

}  // namespace compir

#endif  // COMPIR_COMPIR_HPP_
