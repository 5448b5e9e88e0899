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

#include "compir/compir.hpp"

#include <stdexcept>
#include <thread>

#include "compir/serial.hpp"

namespace compir {

namespace {
constexpr std::uint8_t kCommitmentVersion = 1;
}

WitnessMode default_witness_mode(SchemeId scheme) {
  return scheme == SchemeId::kWy ? WitnessMode::kBatched : WitnessMode::kPerCombination;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAccepted: return "accepted";
    case Verdict::kRejected: return "rejected";
    case Verdict::kUnreachable: return "unreachable";
    case Verdict::kMalformed: return "malformed";
  }
  return "unknown";
}

PublicParams compir_setup(const SchemeParams& params, Rng& entropy) {
  return PublicParams::setup(params.columns(), entropy);
}

Commitment compir_commit_hashes(const PublicParams& pp, std::span<const Scalar> h) {
  if (h.size() != pp.n()) {
    throw std::invalid_argument("hash vector length " + std::to_string(h.size()) +
                                " does not match public parameters (" +
                                std::to_string(pp.n()) + ")");
  }
  return lmc_commit(pp, h);
}

Commitment compir_commit(const PublicParams& pp, const Database& db) {
  if (db.cols() != pp.n()) {
    throw std::invalid_argument("database has " + std::to_string(db.cols()) +
                                " columns, public parameters expect " +
                                std::to_string(pp.n()));
  }
  return lmc_commit(pp, hash_database(db));
}

ServerContext::ServerContext(const PublicParams& pp, const Database& db,
                             std::optional<SchemeParams> pinned)
    : pp_(&pp), db_(&db), pinned_(std::move(pinned)) {
  if (db.cols() != pp.n()) {
    throw std::invalid_argument("database has " + std::to_string(db.cols()) +
                                " columns, public parameters expect " +
                                std::to_string(pp.n()));
  }
  if (pinned_ && pinned_->columns() != db.cols()) {
    throw std::invalid_argument("scheme parameters do not match the database");
  }
  h_ = hash_database(db);
  com_ = lmc_commit(pp, h_);
}

bool ServerContext::accepts(const SchemeParams& params) const {
  if (pinned_) return params == *pinned_;
  return params.columns() == db_->cols();
}

std::vector<Witness> compir_witnesses(const PublicParams& pp, std::span<const Scalar> h,
                                      const Commitment& com,
                                      std::span<const std::vector<Scalar>> coeffs,
                                      std::span<const Scalar> hash_answers,
                                      WitnessMode mode) {
  if (coeffs.size() != hash_answers.size() || coeffs.empty()) {
    throw std::invalid_argument("need one hash answer per coefficient vector");
  }
  std::vector<Witness> out;
  if (mode == WitnessMode::kBatched) {
    const auto r = lmc_batch_challenge(com, coeffs, hash_answers);
    const auto agg = lmc_aggregate(coeffs, hash_answers, r);
    out.push_back(lmc_witness(pp, h, agg.c));
  } else {
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(lmc_witness(pp, h, c));
  }
  return out;
}

AnswerBundle compir_answer(const ServerContext& ctx, const SchemeParams& params,
                           const Query& q, WitnessMode mode) {
  if (!ctx.accepts(params)) {
    throw std::invalid_argument("scheme parameters do not match this server");
  }
  AnswerBundle b;
  b.mode = mode;
  b.data = answer_gen(params, MatrixView::of(ctx.db()), q);
  const Answer ha = answer_gen(params, MatrixView::row(ctx.hashes()), q);
  b.hashes.reserve(ha.size());
  for (const auto& row : ha) b.hashes.push_back(row[0]);
  const auto coeffs = coeff_vectors(params, q);
  b.witnesses = compir_witnesses(ctx.pp(), ctx.hashes(), ctx.commitment(), coeffs,
                                 b.hashes, mode);
  return b;
}

Verdict verify_bundle(const SchemeParams& params, const PublicParams& pp,
                      const Commitment& com, std::size_t m, const Query& q,
                      const AnswerBundle& bundle) {
  const std::size_t L = params.combinations();
  if (bundle.data.size() != L || bundle.hashes.size() != L) return Verdict::kMalformed;
  for (const auto& row : bundle.data) {
    if (row.size() != m) return Verdict::kMalformed;
  }
  const std::size_t expected_w = bundle.mode == WitnessMode::kBatched ? 1 : L;
  if (bundle.mode != WitnessMode::kBatched && bundle.mode != WitnessMode::kPerCombination) {
    return Verdict::kMalformed;
  }
  if (bundle.witnesses.size() != expected_w) return Verdict::kMalformed;

  const auto coeffs = coeff_vectors(params, q);
  if (bundle.mode == WitnessMode::kBatched) {
    const auto r = lmc_batch_challenge(com, coeffs, bundle.hashes);
    const auto agg = lmc_aggregate(coeffs, bundle.hashes, r);
    return lmc_verify(pp, com, agg.c, agg.y, bundle.witnesses[0]) ? Verdict::kAccepted
                                                                   : Verdict::kRejected;
  }
  // Per-combination: check all of them, reject on any failure.
  bool ok = true;
  for (std::size_t u = 0; u < L; ++u) {
    ok = lmc_verify(pp, com, coeffs[u], bundle.hashes[u], bundle.witnesses[u]) && ok;
  }
  return ok ? Verdict::kAccepted : Verdict::kRejected;
}

RetrievalResult compir_decode(const SchemeParams& params, std::size_t index,
                              std::span<const AnswerBundle> bundles, const Aux& aux) {
  RetrievalResult res;
  res.verdicts.assign(bundles.size(), Verdict::kAccepted);
  std::vector<Answer> data;
  std::vector<Answer> hashes;
  data.reserve(bundles.size());
  hashes.reserve(bundles.size());
  for (const auto& b : bundles) {
    data.push_back(b.data);
    Answer h;
    for (const auto& y : b.hashes) h.push_back({y});
    hashes.push_back(std::move(h));
  }
  const Item h_hat = extract(params, index, hashes, aux);
  Item x_hat = extract(params, index, data, aux);
  for (std::size_t c = 0; c < x_hat.size(); ++c) {
    if (hash_item(x_hat[c]) != h_hat[c][0]) {
      res.hash_mismatch = true;
      return res;
    }
  }
  res.item = std::move(x_hat);
  return res;
}

RetrievalResult compir_extract(const SchemeParams& params, const PublicParams& pp,
                               const Commitment& com, std::size_t m, std::size_t index,
                               std::span<const Query> queries,
                               std::span<const AnswerBundle> bundles, const Aux& aux,
                               ExtractOptions opts) {
  const std::size_t k = params.k;
  if (queries.size() != k || bundles.size() != k) {
    throw std::invalid_argument("need one query and one bundle per server");
  }
  std::vector<Verdict> verdicts(k);
  if (opts.parallel && k > 1) {
    std::vector<OpCounters> deltas(k);
    std::vector<std::thread> workers;
    workers.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      workers.emplace_back([&, j] {
        CounterScope scope;
        verdicts[j] = verify_bundle(params, pp, com, m, queries[j], bundles[j]);
        deltas[j] = scope.delta();
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& d : deltas) op_counters() += d;
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      verdicts[j] = verify_bundle(params, pp, com, m, queries[j], bundles[j]);
    }
  }

  for (auto v : verdicts) {
    if (v != Verdict::kAccepted) {
      RetrievalResult res;
      res.verdicts = std::move(verdicts);
      return res;
    }
  }
  RetrievalResult res = compir_decode(params, index, bundles, aux);
  res.verdicts = std::move(verdicts);
  return res;
}

Bytes CommitmentRecord::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("CPCM"));
  w.u8(kCommitmentVersion);
  w.u8(static_cast<std::uint8_t>(params.scheme));
  w.u8(static_cast<std::uint8_t>(params.k));
  w.u8(static_cast<std::uint8_t>(params.t));
  w.u32(static_cast<std::uint32_t>(params.n));
  w.u32(static_cast<std::uint32_t>(m));
  w.raw(com.encode());
  return w.take();
}

CommitmentRecord CommitmentRecord::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.str(4) != "CPCM") throw DecodeError("commitment: bad magic");
  if (r.u8() != kCommitmentVersion) throw DecodeError("commitment: unsupported version");
  const auto scheme = r.u8();
  const std::size_t k = r.u8();
  const std::size_t t = r.u8();
  const std::size_t n = r.u32();
  const std::size_t m = r.u32();
  if (scheme < 1 || scheme > 4) throw DecodeError("commitment: unknown scheme id");
  if (m == 0) throw DecodeError("commitment: m must be positive");
  CommitmentRecord rec;
  try {
    rec.params = SchemeParams::make(static_cast<SchemeId>(scheme), k, t, n);
  } catch (const std::invalid_argument& e) {
    throw DecodeError(std::string("commitment: ") + e.what());
  }
  rec.m = m;
  rec.com = Commitment::decode(r.bytes(kG1Bytes));
  r.expect_end();
  return rec;
}

void CommitmentRecord::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

CommitmentRecord CommitmentRecord::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

}  // namespace compir
