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

#include <gtest/gtest.h>

#include "compir/compir.hpp"
#include "test_util.hpp"

namespace compir {
namespace {

using testing::dot;

struct Deployment {
  SchemeParams params;
  std::size_t m;
  PublicParams pp;
  Database db;
  Commitment com;

  static Deployment make(const SchemeParams& params, std::size_t m, Rng& rng) {
    auto pp = compir_setup(params, rng);
    auto db = Database::random(m, params.columns(), rng);
    const auto com = compir_commit(pp, db);
    return Deployment{params, m, std::move(pp), std::move(db), com};
  }
};

struct Session {
  QuerySet qs;
  std::vector<AnswerBundle> bundles;
};

Session honest_run(const Deployment& d, std::size_t index, Rng& rng) {
  const ServerContext ctx(d.pp, d.db);
  Session r;
  r.qs = queries_gen(d.params, index, rng);
  for (const auto& q : r.qs.queries) r.bundles.push_back(compir_answer(ctx, d.params, q));
  return r;
}

RetrievalResult client(const Deployment& d, std::size_t index, const Session& r,
                       ExtractOptions opts = {}) {
  return compir_extract(d.params, d.pp, d.com, d.m, index, r.qs.queries, r.bundles, r.qs.aux,
                        opts);
}

Item direct(const Deployment& d, std::size_t index) {
  Item out;
  for (std::size_t c = 0; c < d.params.width(); ++c) {
    const auto col = d.db.column((index - 1) * d.params.width() + c);
    out.emplace_back(col.begin(), col.end());
  }
  return out;
}

std::vector<SchemeParams> sample_params(std::size_t n) {
  return {SchemeParams::make(SchemeId::kCkgs2, 2, 1, n),
          SchemeParams::make(SchemeId::kCkgsK, 3, 2, n),
          SchemeParams::make(SchemeId::kWy, 2, 1, n),
          SchemeParams::make(SchemeId::kWy, 4, 2, n),
          SchemeParams::make(SchemeId::kBe, 3, 1, n),
          SchemeParams::make(SchemeId::kBe, 4, 2, n)};
}

TEST(Compir, SetupDimensions) {
  Rng rng(1);
  EXPECT_EQ(compir_setup(SchemeParams::make(SchemeId::kBe, 3, 1, 4), rng).n(), 8u);
  EXPECT_EQ(compir_setup(SchemeParams::make(SchemeId::kWy, 2, 1, 1024), rng).n(), 1024u);
  EXPECT_EQ(compir_setup(SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5), rng).n(), 5u);
}

// Two servers, five items, target 1, subset {1,3,4}.
TEST(Compir, WorkedExampleBundle) {
  Rng rng(2);
  const auto params = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5);
  const auto d = Deployment::make(params, 3, rng);
  const ServerContext ctx(d.pp, d.db);
  Session r;
  r.qs = ckgs2_queries_from_subset(params, 1, {true, false, true, true, false});
  for (const auto& q : r.qs.queries) r.bundles.push_back(compir_answer(ctx, params, q));
  const auto h = hash_database(d.db);
  EXPECT_EQ(r.bundles[0].hashes[0], h[0] + h[2] + h[3]);
  EXPECT_EQ(r.bundles[1].hashes[0], h[2] + h[3]);
  ASSERT_EQ(r.bundles[0].witnesses.size(), 1u);
  const auto res = client(d, 1, r);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(*res.item, direct(d, 1));
  EXPECT_EQ(res.verdicts, std::vector<Verdict>(2, Verdict::kAccepted));
  EXPECT_EQ(d.com.encode().size(), 48u);
}

TEST(Compir, HonestRetrievalEveryScheme) {
  Rng rng(3);
  for (const auto& params : sample_params(12)) {
    for (std::size_t m : {1u, 5u}) {
      const auto d = Deployment::make(params, m, rng);
      for (std::size_t i : {std::size_t{1}, std::size_t{7}, params.n}) {
        const auto r = honest_run(d, i, rng);
        const auto res = client(d, i, r);
        ASSERT_TRUE(res.ok()) << scheme_name(params.scheme) << " k=" << params.k;
        EXPECT_EQ(*res.item, direct(d, i));
        EXPECT_FALSE(res.hash_mismatch);
      }
    }
  }
}

TEST(Compir, HashAnswersAreCoefficientInnerProducts) {
  Rng rng(4);
  for (const auto& params : sample_params(9)) {
    const auto d = Deployment::make(params, 2, rng);
    const auto h = hash_database(d.db);
    const auto r = honest_run(d, 3, rng);
    for (std::size_t j = 0; j < params.k; ++j) {
      const auto cs = coeff_vectors(params, r.qs.queries[j]);
      ASSERT_EQ(r.bundles[j].hashes.size(), cs.size());
      for (std::size_t u = 0; u < cs.size(); ++u) EXPECT_EQ(r.bundles[j].hashes[u], dot(cs[u], h));
    }
  }
}

TEST(Compir, WitnessModes) {
  Rng rng(5);
  const auto params = SchemeParams::make(SchemeId::kWy, 3, 1, 10);
  EXPECT_EQ(default_witness_mode(SchemeId::kWy), WitnessMode::kBatched);
  EXPECT_EQ(default_witness_mode(SchemeId::kBe), WitnessMode::kPerCombination);
  const auto d = Deployment::make(params, 2, rng);
  const ServerContext ctx(d.pp, d.db);
  const auto qs = queries_gen(params, 4, rng);
  const auto batched = compir_answer(ctx, params, qs.queries[0], WitnessMode::kBatched);
  const auto per = compir_answer(ctx, params, qs.queries[0], WitnessMode::kPerCombination);
  EXPECT_EQ(batched.witnesses.size(), 1u);
  EXPECT_EQ(per.witnesses.size(), params.ell + 1);
  EXPECT_EQ(batched.data, per.data);
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 2, qs.queries[0], batched), Verdict::kAccepted);
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 2, qs.queries[0], per), Verdict::kAccepted);
  // A per-combination witness list under the batched flag has the wrong shape.
  auto mixed = per;
  mixed.mode = WitnessMode::kBatched;
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 2, qs.queries[0], mixed), Verdict::kMalformed);
  // Tampering any one combination breaks the batched opening.
  for (std::size_t u = 0; u <= params.ell; ++u) {
    auto bad = batched;
    bad.hashes[u] += Scalar::one();
    EXPECT_EQ(verify_bundle(params, d.pp, d.com, 2, qs.queries[0], bad), Verdict::kRejected);
  }
}

TEST(Compir, MalformedBundles) {
  Rng rng(6);
  const auto params = SchemeParams::make(SchemeId::kBe, 3, 1, 4);
  const auto d = Deployment::make(params, 3, rng);
  const auto r = honest_run(d, 2, rng);
  const auto& q = r.qs.queries[0];
  auto short_rows = r.bundles[0];
  short_rows.data[0].pop_back();
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 3, q, short_rows), Verdict::kMalformed);
  auto extra = r.bundles[0];
  extra.hashes.push_back(Scalar::one());
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 3, q, extra), Verdict::kMalformed);
  auto no_wit = r.bundles[0];
  no_wit.witnesses.clear();
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 3, q, no_wit), Verdict::kMalformed);
  EXPECT_EQ(verify_bundle(params, d.pp, d.com, 4, q, r.bundles[0]), Verdict::kMalformed);
}

TEST(Compir, DataTamperCaughtByHashCheck) {
  Rng rng(7);
  for (const auto& params : sample_params(8)) {
    const auto d = Deployment::make(params, 3, rng);
    auto r = honest_run(d, 5, rng);
    r.bundles[params.k - 1].data[0][1] += Scalar::one();
    const auto res = client(d, 5, r);
    EXPECT_FALSE(res.ok()) << scheme_name(params.scheme);
    EXPECT_TRUE(res.hash_mismatch) << scheme_name(params.scheme);
    EXPECT_EQ(res.verdicts, std::vector<Verdict>(params.k, Verdict::kAccepted));
  }
}

TEST(Compir, HashTamperFlagsCulprit) {
  Rng rng(8);
  for (const auto& params : sample_params(8)) {
    const auto d = Deployment::make(params, 2, rng);
    auto r = honest_run(d, 2, rng);
    r.bundles[0].hashes.back() += Scalar::one();
    const auto res = client(d, 2, r);
    EXPECT_FALSE(res.ok());
    EXPECT_FALSE(res.hash_mismatch);
    ASSERT_EQ(res.verdicts.size(), params.k);
    EXPECT_EQ(res.verdicts[0], Verdict::kRejected);
    for (std::size_t j = 1; j < params.k; ++j) EXPECT_EQ(res.verdicts[j], Verdict::kAccepted);
  }
}

TEST(Compir, EveryServerCheckedAfterFailure) {
  Rng rng(9);
  const auto params = SchemeParams::make(SchemeId::kCkgsK, 4, 3, 6);
  const auto d = Deployment::make(params, 1, rng);
  auto r = honest_run(d, 6, rng);
  r.bundles[0].witnesses[0] = Witness{G2::generator()};
  r.bundles[2].hashes[0] += Scalar::one();
  const auto res = client(d, 6, r);
  EXPECT_FALSE(res.ok());
  EXPECT_EQ(res.verdicts, (std::vector<Verdict>{Verdict::kRejected, Verdict::kAccepted,
                                                Verdict::kRejected, Verdict::kAccepted}));
}

TEST(Compir, ConsistentWrongDatabaseRejected) {
  // Every server answers from x' with honest hashes of x: the hash check
  // at the end fails.
  Rng rng(10);
  const auto params = SchemeParams::make(SchemeId::kBe, 3, 2, 5);
  const auto d = Deployment::make(params, 2, rng);
  auto x2 = d.db;
  for (std::size_t c = 0; c < x2.cols(); ++c) x2.at(0, c) += Scalar::one();
  auto r = honest_run(d, 4, rng);
  for (std::size_t j = 0; j < params.k; ++j) {
    r.bundles[j].data = answer_gen(params, MatrixView::of(x2), r.qs.queries[j]);
  }
  const auto res = client(d, 4, r);
  EXPECT_FALSE(res.ok());
  EXPECT_TRUE(res.hash_mismatch);
}

TEST(Compir, CommitmentBindsEveryCell) {
  Rng rng(11);
  const auto params = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 10);
  const auto d = Deployment::make(params, 4, rng);
  EXPECT_EQ(compir_commit(d.pp, d.db), d.com);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = d.db;
    x.at(rng.uniform(4), rng.uniform(10)) += Scalar::from_u64(1 + rng.uniform(1000));
    EXPECT_NE(compir_commit(d.pp, x), d.com);
  }
  const Database wrong(4, 9);
  EXPECT_THROW(compir_commit(d.pp, wrong), std::invalid_argument);
  EXPECT_THROW(ServerContext(d.pp, wrong), std::invalid_argument);
  EXPECT_EQ(compir_commit_hashes(d.pp, hash_database(d.db)), d.com);
}

TEST(Compir, ServerAcceptance) {
  Rng rng(12);
  const auto be = SchemeParams::make(SchemeId::kBe, 3, 1, 4);
  const auto d = Deployment::make(be, 1, rng);
  const ServerContext open(d.pp, d.db);
  // 8 columns also fit ckgs2 with n = 8.
  const auto c2 = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 8);
  EXPECT_TRUE(open.accepts(be));
  EXPECT_TRUE(open.accepts(c2));
  EXPECT_FALSE(open.accepts(SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4)));
  const ServerContext pinned(d.pp, d.db, be);
  EXPECT_TRUE(pinned.accepts(be));
  EXPECT_FALSE(pinned.accepts(c2));
  const auto qs = queries_gen(c2, 1, rng);
  EXPECT_THROW(compir_answer(pinned, c2, qs.queries[0]), std::invalid_argument);
  EXPECT_THROW(ServerContext(d.pp, d.db, SchemeParams::make(SchemeId::kBe, 3, 1, 5)),
               std::invalid_argument);
}

TEST(Compir, ParallelVerifyMatchesSequential) {
  Rng rng(13);
  const auto params = SchemeParams::make(SchemeId::kWy, 3, 1, 20);
  const auto d = Deployment::make(params, 4, rng);
  const auto r = honest_run(d, 11, rng);
  OpCounters seq, par;
  RetrievalResult a, b;
  {
    CounterScope s;
    a = client(d, 11, r, ExtractOptions{false});
    seq = s.delta();
  }
  {
    CounterScope s;
    b = client(d, 11, r, ExtractOptions{true});
    par = s.delta();
  }
  EXPECT_EQ(a.item, b.item);
  EXPECT_EQ(a.verdicts, b.verdicts);
  EXPECT_EQ(seq, par);
  EXPECT_EQ(seq.pairings, 3 * params.k);
}

TEST(Compir, DecodeWithoutVerification) {
  Rng rng(14);
  const auto params = SchemeParams::make(SchemeId::kCkgsK, 2, 1, 7);
  const auto d = Deployment::make(params, 3, rng);
  const auto r = honest_run(d, 7, rng);
  const auto res = compir_decode(params, 7, r.bundles, r.qs.aux);
  ASSERT_TRUE(res.ok());
  EXPECT_EQ(*res.item, direct(d, 7));
}

TEST(CommitmentRecord, RoundTrip) {
  Rng rng(15);
  for (const auto& params : sample_params(6)) {
    const auto d = Deployment::make(params, 3, rng);
    const CommitmentRecord rec{params, 3, d.com};
    const Bytes b = rec.serialize();
    EXPECT_EQ(b.size(), 4 + 1 + 3 + 4 + 4 + 48u);
    const auto back = CommitmentRecord::deserialize(b);
    EXPECT_EQ(back.params, params);
    EXPECT_EQ(back.m, 3u);
    EXPECT_EQ(back.com, d.com);
  }
  const CommitmentRecord rec{SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4), 1,
                             Commitment{G1::generator()}};
  Bytes b = rec.serialize();
  Bytes bad_magic = b;
  bad_magic[0] = 'Z';
  EXPECT_THROW(CommitmentRecord::deserialize(bad_magic), DecodeError);
  Bytes bad_params = b;
  bad_params[6] = 3;  // ckgs2 with k = 3
  EXPECT_THROW(CommitmentRecord::deserialize(bad_params), DecodeError);
  Bytes bad_scheme = b;
  bad_scheme[5] = 7;
  EXPECT_THROW(CommitmentRecord::deserialize(bad_scheme), DecodeError);
  b.push_back(0);
  EXPECT_THROW(CommitmentRecord::deserialize(b), DecodeError);
}

}  // namespace
}  // namespace compir
