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

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "compir/pir.hpp"
#include "test_util.hpp"

namespace compir {
namespace {

using testing::dot;
using testing::random_vec;

std::vector<Scalar> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Scalar> out;
  for (auto x : xs) out.push_back(Scalar::from_i64(x));
  return out;
}

std::vector<SchemeParams> all_params(std::size_t n, std::size_t max_k = 6) {
  std::vector<SchemeParams> out;
  out.push_back(SchemeParams::make(SchemeId::kCkgs2, 2, 1, n));
  for (std::size_t k = 2; k <= max_k; ++k) {
    out.push_back(SchemeParams::make(SchemeId::kCkgsK, k, k - 1, n));
    for (std::size_t t = 1; t < k; ++t) {
      out.push_back(SchemeParams::make(SchemeId::kWy, k, t, n));
      out.push_back(SchemeParams::make(SchemeId::kBe, k, t, n));
    }
  }
  return out;
}

std::string label(const SchemeParams& p) {
  return std::string(scheme_name(p.scheme)) + " k=" + std::to_string(p.k) +
         " t=" + std::to_string(p.t) + " n=" + std::to_string(p.n);
}

std::vector<Answer> answer_all(const SchemeParams& p, const Database& db, const QuerySet& qs) {
  std::vector<Answer> out;
  for (const auto& q : qs.queries) out.push_back(answer_gen(p, MatrixView::of(db), q));
  return out;
}

TEST(SchemeParams, Validation) {
  EXPECT_THROW(SchemeParams::make(SchemeId::kCkgs2, 3, 1, 4), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kCkgsK, 4, 2, 4), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kWy, 3, 0, 4), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kWy, 3, 3, 4), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 1, 1, 4), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 3, 1, 0), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 3, 1, 4, ints({1, 2, 2})),
               std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 3, 1, 4, ints({0, 1, 2})),
               std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 3, 1, 4, ints({1, 2})), std::invalid_argument);
  EXPECT_THROW(SchemeParams::make(static_cast<SchemeId>(9), 3, 1, 4), std::invalid_argument);
  const auto wy = SchemeParams::make(SchemeId::kWy, 3, 1, 4);
  EXPECT_EQ(wy.d, 5u);
  EXPECT_THROW(wy.with_wy_degree(6), std::invalid_argument);
  EXPECT_THROW(wy.with_wy_degree(0), std::invalid_argument);
  EXPECT_EQ(wy.with_wy_degree(2).d, 2u);
  EXPECT_THROW(SchemeParams::make(SchemeId::kBe, 3, 1, 4).with_wy_degree(2),
               std::invalid_argument);
}

TEST(SchemeParams, Names) {
  EXPECT_EQ(parse_scheme("CKGS2"), SchemeId::kCkgs2);
  EXPECT_EQ(parse_scheme("2-ckgs"), SchemeId::kCkgs2);
  EXPECT_EQ(parse_scheme("k-CKGS"), SchemeId::kCkgsK);
  EXPECT_EQ(parse_scheme("wy"), SchemeId::kWy);
  EXPECT_EQ(parse_scheme("BE"), SchemeId::kBe);
  EXPECT_FALSE(parse_scheme("pir").has_value());
  for (auto id : {SchemeId::kCkgs2, SchemeId::kCkgsK, SchemeId::kWy, SchemeId::kBe}) {
    EXPECT_EQ(parse_scheme(scheme_name(id)), id);
  }
}

TEST(SchemeParams, WyDegreeGuard) {
  for (std::size_t k = 2; k <= 8; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      const auto p = SchemeParams::make(SchemeId::kWy, k, t, 100);
      EXPECT_EQ(p.d, (2 * k - 1) / t);
      EXPECT_LE(p.d * p.t, 2 * k - 1);
      EXPECT_GE(binomial(p.ell, p.d), p.n);
      if (p.ell > p.d) {
        EXPECT_LT(binomial(p.ell - 1, p.d), p.n);
      }
    }
  }
}

TEST(SchemeParams, WyLengthForThousandItems) {
  const auto p = SchemeParams::make(SchemeId::kWy, 2, 1, 1024);
  EXPECT_EQ(p.d, 3u);
  // Brute-force least ell with ell(ell-1)(ell-2)/6 >= 1024.
  std::size_t ell = 3;
  while (ell * (ell - 1) * (ell - 2) / 6 < 1024) ++ell;
  EXPECT_EQ(ell, 20u);
  EXPECT_EQ(p.ell, ell);
  EXPECT_EQ(p.query_length(), 20u);
  EXPECT_EQ(p.combinations(), 21u);
}

TEST(SchemeParams, BeShape) {
  const auto p = SchemeParams::make(SchemeId::kBe, 5, 2, 7);
  EXPECT_EQ(p.width(), 3u);
  EXPECT_EQ(p.columns(), 21u);
  EXPECT_EQ(p.query_length(), 21u);
  EXPECT_EQ(p.combinations(), 1u);
}

TEST(Binomial, SmallValuesAndSaturation) {
  EXPECT_EQ(binomial(5, 2), 10u);
  EXPECT_EQ(binomial(20, 3), 1140u);
  EXPECT_EQ(binomial(19, 3), 969u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(7, 0), 1u);
  EXPECT_EQ(binomial(1000, 500), std::uint64_t{1} << 63);
}

TEST(Ckgs2, WorkedExample) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5);
  const std::vector<bool> subset = {true, false, true, true, false};
  const auto qs = ckgs2_queries_from_subset(p, 1, subset);
  EXPECT_EQ(qs.queries[0].entries, ints({1, 0, 1, 1, 0}));
  EXPECT_EQ(qs.queries[1].entries, ints({0, 0, 1, 1, 0}));
  EXPECT_EQ(qs.aux.sign, 1);
  // Server 2 on the hash vector: h3 + h4.
  Rng rng(1);
  const auto h = random_vec(5, rng);
  EXPECT_EQ(answer_gen(p, MatrixView::row(h), qs.queries[1])[0][0], h[2] + h[3]);
  EXPECT_EQ(coeff_vectors(p, qs.queries[1])[0], ints({0, 0, 1, 1, 0}));
  const auto db = Database::random(3, 5, rng);
  const auto ans = answer_all(p, db, qs);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(ans[0][0][r], db.at(r, 0) + db.at(r, 2) + db.at(r, 3));
  }
  const auto item = extract(p, 1, ans, qs.aux);
  EXPECT_EQ(item[0], std::vector<Scalar>(db.column(0).begin(), db.column(0).end()));
}

TEST(Ckgs2, SignWhenTargetOutsideSubset) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5);
  const std::vector<bool> subset = {true, false, true, true, false};
  const auto qs = ckgs2_queries_from_subset(p, 2, subset);
  EXPECT_EQ(qs.queries[1].entries, ints({1, 1, 1, 1, 0}));
  EXPECT_EQ(qs.aux.sign, 2);
  Rng rng(2);
  const auto db = Database::random(2, 5, rng);
  const auto item = extract(p, 2, answer_all(p, db, qs), qs.aux);
  EXPECT_EQ(item[0][0], db.at(0, 1));
  EXPECT_EQ(item[0][1], db.at(1, 1));
}

TEST(Ckgs2, UnitQueryReturnsColumn) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 6);
  Rng rng(3);
  const auto db = Database::random(4, 6, rng);
  Query q;
  q.entries.assign(6, Scalar::zero());
  q.entries[3] = Scalar::one();
  const auto a = answer_gen(p, MatrixView::of(db), q);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], std::vector<Scalar>(db.column(3).begin(), db.column(3).end()));
}

TEST(CkgsK, SharesSumToUnitVector) {
  Rng rng(4);
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto p = SchemeParams::make(SchemeId::kCkgsK, k, k - 1, 9);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t i = 1 + rng.uniform(9);
      const auto qs = queries_gen(p, i, rng);
      ASSERT_EQ(qs.queries.size(), k);
      for (std::size_t c = 0; c < 9; ++c) {
        Scalar sum;
        for (const auto& q : qs.queries) sum += q.entries[c];
        EXPECT_EQ(sum, c + 1 == i ? Scalar::one() : Scalar::zero());
      }
    }
  }
}

TEST(Wy, EncodingLexicographicOrder) {
  // Enumerate every d-subset of [ell] as a bitmask and sort the supports.
  for (auto [ell, d] : {std::pair<std::size_t, std::size_t>{4, 3}, {6, 2}, {7, 3}, {9, 5}}) {
    std::vector<std::vector<std::uint32_t>> all;
    for (std::uint32_t mask = 0; mask < (1u << ell); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != d) continue;
      std::vector<std::uint32_t> s;
      for (std::uint32_t u = 0; u < ell; ++u) {
        if (mask >> u & 1) s.push_back(u);
      }
      all.push_back(s);
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), binomial(ell, d));
    for (std::size_t j = 1; j <= all.size(); ++j) {
      EXPECT_EQ(wy_support(ell, d, j), all[j - 1]) << "ell=" << ell << " d=" << d << " j=" << j;
    }
    EXPECT_THROW(wy_support(ell, d, 0), std::invalid_argument);
    EXPECT_THROW(wy_support(ell, d, all.size() + 1), std::invalid_argument);
  }
}

TEST(Wy, EncodeIndexFirstItem) {
  const auto p = SchemeParams::make(SchemeId::kWy, 2, 1, 4);
  ASSERT_EQ(p.ell, 4u);
  EXPECT_EQ(wy_encode_index(p, 1), (std::vector<std::uint8_t>{1, 1, 1, 0}));
  EXPECT_THROW(wy_encode_index(p, 5), std::invalid_argument);
}

TEST(Wy, EncodingWeightAndInjectivity) {
  const auto p = SchemeParams::make(SchemeId::kWy, 3, 2, 200);
  std::set<std::vector<std::uint8_t>> seen;
  for (std::size_t j = 1; j <= p.n; ++j) {
    const auto e = wy_encode_index(p, j);
    EXPECT_EQ(std::count(e.begin(), e.end(), 1), static_cast<long>(p.d));
    seen.insert(e);
  }
  EXPECT_EQ(seen.size(), p.n);
}

TEST(Wy, AllOnesQuerySumsItems) {
  const auto p = SchemeParams::make(SchemeId::kWy, 2, 1, 4);
  Rng rng(5);
  const auto db = Database::random(3, 4, rng);
  Query q;
  q.entries.assign(p.ell, Scalar::one());
  const auto a = answer_gen(p, MatrixView::of(db), q);
  ASSERT_EQ(a.size(), p.ell + 1);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(a[0][r], db.at(r, 0) + db.at(r, 1) + db.at(r, 2) + db.at(r, 3));
  }
}

// F_x is multilinear, so dF/dz_u = F(z_u := 1) - F(z_u := 0).
TEST(Wy, PartialsMatchFiniteDifference) {
  Rng rng(6);
  for (auto [k, t] : {std::pair<std::size_t, std::size_t>{2, 1}, {3, 1}, {3, 2}, {4, 3}}) {
    const auto p = SchemeParams::make(SchemeId::kWy, k, t, 30);
    const auto h = random_vec(p.n, rng);
    Query q{random_vec(p.ell, rng)};
    const auto a = answer_gen(p, MatrixView::row(h), q);
    for (std::size_t u = 0; u < p.ell; ++u) {
      Query hi = q, lo = q;
      hi.entries[u] = Scalar::one();
      lo.entries[u] = Scalar::zero();
      const Scalar diff = answer_gen(p, MatrixView::row(h), hi)[0][0] -
                          answer_gen(p, MatrixView::row(h), lo)[0][0];
      EXPECT_EQ(a[1 + u][0], diff) << "u=" << u;
    }
  }
}

TEST(Wy, HermiteConstant) {
  const auto betas = ints({1, 2, 3});
  const Scalar c = Scalar::from_u64(17);
  const auto coeffs = wy_hermite_solve(betas, std::vector<Scalar>(3, c), std::vector<Scalar>(3));
  EXPECT_EQ(coeffs, (std::vector<Scalar>{c, {}, {}, {}, {}, {}}));
}

TEST(Wy, HermiteCubic) {
  const auto coeffs = wy_hermite_solve(ints({1, 2}), ints({1, 8}), ints({3, 12}));
  EXPECT_EQ(coeffs, ints({0, 0, 0, 1}));
}

TEST(Wy, HermiteRandomRoundTrip) {
  Rng rng(7);
  for (std::size_t k = 2; k <= 5; ++k) {
    std::vector<Scalar> betas;
    for (std::size_t j = 0; j < k; ++j) betas.push_back(rng.next_scalar());
    const auto f = random_vec(2 * k, rng);
    std::vector<Scalar> vals(k), ders(k);
    for (std::size_t j = 0; j < k; ++j) {
      Scalar pw = Scalar::one(), prev = Scalar::zero();
      for (std::size_t e = 0; e < 2 * k; ++e) {
        vals[j] += f[e] * pw;
        ders[j] += f[e] * Scalar::from_u64(e) * prev;
        prev = pw;
        pw *= betas[j];
      }
    }
    EXPECT_EQ(wy_hermite_solve(betas, vals, ders), f);
  }
  EXPECT_THROW(wy_hermite_solve(ints({1, 1}), ints({0, 0}), ints({0, 0})),
               std::invalid_argument);
}

TEST(Be, TwoByTwoInverse) {
  const auto p = SchemeParams::make(SchemeId::kBe, 2, 1, 3);
  const auto m = be_matrices(p);
  FieldMatrix v(2, 2), vi(2, 2);
  v(0, 0) = v(0, 1) = v(1, 0) = Scalar::one();
  v(1, 1) = Scalar::from_u64(2);
  vi(0, 0) = Scalar::from_u64(2);
  vi(0, 1) = vi(1, 0) = Scalar::from_i64(-1);
  vi(1, 1) = Scalar::one();
  EXPECT_EQ(m.v, v);
  EXPECT_EQ(m.v_inv, vi);
  EXPECT_EQ(m.random_rows, 1u);
  EXPECT_EQ(m.unit_rows, 1u);
}

TEST(Be, TwoServerQueriesAndExtraction) {
  // q_j = v + beta_j e_i; V^{-1} stacks (v.x, x_i).
  const auto p = SchemeParams::make(SchemeId::kBe, 2, 1, 2);
  Rng rng(8);
  const auto qs = queries_gen(p, 2, rng);
  Scalar v0 = qs.queries[0].entries[0];
  EXPECT_EQ(qs.queries[1].entries[0], v0);
  EXPECT_EQ(qs.queries[1].entries[1] - qs.queries[0].entries[1], Scalar::one());
  const auto db = Database::random(2, 2, rng);
  const auto item = extract(p, 2, answer_all(p, db, qs), qs.aux);
  ASSERT_EQ(item.size(), 1u);
  EXPECT_EQ(item[0][0], db.at(0, 1));
  EXPECT_EQ(item[0][1], db.at(1, 1));
}

TEST(Be, InverseAndMinors) {
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto p = SchemeParams::make(SchemeId::kBe, k, 1, 2);
    const auto m = be_matrices(p);
    EXPECT_EQ(m.v * m.v_inv, FieldMatrix::identity(k));
    EXPECT_EQ(m.v_inv * m.v, FieldMatrix::identity(k));
  }
}

TEST(Be, QueriesAreVandermondeMix) {
  Rng rng(9);
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      const auto p = SchemeParams::make(SchemeId::kBe, k, t, 5);
      const std::size_t i = 1 + rng.uniform(5);
      const auto qs = queries_gen(p, i, rng);
      const auto m = be_matrices(p);
      // Rows t..k-1 of V^{-1} Q are the unit vectors of block i.
      for (std::size_t r = 0; r < k - t; ++r) {
        for (std::size_t c = 0; c < p.columns(); ++c) {
          Scalar acc;
          for (std::size_t j = 0; j < k; ++j) acc += m.v_inv(t + r, j) * qs.queries[j].entries[c];
          const bool unit = c == (i - 1) * p.width() + r;
          EXPECT_EQ(acc, unit ? Scalar::one() : Scalar::zero());
        }
      }
    }
  }
}

// Every subset of `size` elements from [0, k), in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t k, std::size_t size) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask >> j & 1) s.push_back(j);
    }
    out.push_back(s);
  }
  return out;
}

TEST(Privacy, TransferMatricesNonsingular) {
  for (std::size_t k = 2; k <= 6; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      for (auto id : {SchemeId::kWy, SchemeId::kBe}) {
        const auto p = SchemeParams::make(id, k, t, 4);
        for (const auto& s : subsets(k, t)) {
          EXPECT_FALSE(determinant(privacy_transfer_matrix(p, s)).is_zero()) << label(p);
        }
      }
    }
    const auto ck = SchemeParams::make(SchemeId::kCkgsK, k, k - 1, 4);
    for (const auto& s : subsets(k, k - 1)) {
      EXPECT_FALSE(determinant(privacy_transfer_matrix(ck, s)).is_zero()) << label(ck);
    }
  }
  const auto c2 = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4);
  const std::vector<std::size_t> one = {0};
  EXPECT_THROW(privacy_transfer_matrix(c2, one), std::invalid_argument);
}

// Transfer matrix rows reproduce the random part of the queries.
TEST(Privacy, TransferMatrixDescribesQueries) {
  Rng rng(10);
  const auto p = SchemeParams::make(SchemeId::kWy, 4, 2, 10);
  const auto qs = queries_gen(p, 3, rng);
  const auto enc = wy_encode_index(p, 3);
  const std::vector<std::size_t> s = {1, 3};
  const auto tm = privacy_transfer_matrix(p, s);
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t u = 0; u < p.ell; ++u) {
      Scalar acc = enc[u] ? Scalar::one() : Scalar::zero();
      for (std::size_t c = 0; c < 2; ++c) acc += tm(r, c) * qs.aux.vectors[c][u];
      EXPECT_EQ(acc, qs.queries[s[r]].entries[u]);
    }
  }
}

double chi_square_p_value(const std::map<std::uint32_t, std::uint64_t>& counts,
                          std::size_t categories, std::uint64_t samples) {
  const double expected = static_cast<double>(samples) / static_cast<double>(categories);
  double stat = 0;
  for (std::size_t c = 0; c < categories; ++c) {
    const auto it = counts.find(static_cast<std::uint32_t>(c));
    const double o = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    stat += (o - expected) * (o - expected) / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(categories - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

TEST(Privacy, Ckgs2SingleQueriesUniform) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 8);
  const std::uint64_t samples = 100000;
  for (std::size_t target : {2u, 7u}) {
    Rng rng(1000 + target);
    std::map<std::uint32_t, std::uint64_t> counts[2];
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto qs = queries_gen(p, target, rng);
      for (std::size_t j = 0; j < 2; ++j) {
        std::uint32_t v = 0;
        for (std::size_t c = 0; c < 8; ++c) v = v << 1 | (qs.queries[j].entries[c].is_zero() ? 0 : 1);
        ++counts[j][v];
      }
    }
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_GT(chi_square_p_value(counts[j], 256, samples), 0.01)
          << "target " << target << " server " << j + 1;
    }
  }
}

TEST(RoundTrip, EveryScheme) {
  Rng rng(11);
  for (std::size_t n : {4u, 16u, 64u}) {
    for (const auto& p : all_params(n)) {
      for (std::size_t m : {1u, 4u, 32u}) {
        for (int trial = 0; trial < 50; ++trial) {
          const auto db = Database::random(m, p.columns(), rng);
          const std::size_t i = 1 + rng.uniform(n);
          const auto qs = queries_gen(p, i, rng);
          ASSERT_EQ(qs.queries.size(), p.k);
          for (const auto& q : qs.queries) ASSERT_EQ(q.entries.size(), p.query_length());
          const auto item = extract(p, i, answer_all(p, db, qs), qs.aux);
          ASSERT_EQ(item.size(), p.width());
          for (std::size_t c = 0; c < p.width(); ++c) {
            const auto col = db.column((i - 1) * p.width() + c);
            EXPECT_EQ(item[c], std::vector<Scalar>(col.begin(), col.end()))
                << label(p) << " m=" << m << " i=" << i;
          }
        }
      }
    }
  }
}

TEST(RoundTrip, NonDefaultEvaluationPoints) {
  Rng rng(12);
  const auto betas = std::vector<Scalar>{rng.next_scalar(), rng.next_scalar(), rng.next_scalar()};
  for (auto id : {SchemeId::kWy, SchemeId::kBe}) {
    const auto p = SchemeParams::make(id, 3, 1, 10, betas);
    const auto db = Database::random(2, p.columns(), rng);
    const auto qs = queries_gen(p, 7, rng);
    const auto item = extract(p, 7, answer_all(p, db, qs), qs.aux);
    EXPECT_EQ(item[0][0], db.at(0, (7 - 1) * p.width()));
  }
}

TEST(RoundTrip, WyReducedDegree) {
  Rng rng(13);
  const auto p = SchemeParams::make(SchemeId::kWy, 4, 1, 50).with_wy_degree(3);
  EXPECT_EQ(p.d, 3u);
  const auto db = Database::random(3, 50, rng);
  for (std::size_t i : {1u, 25u, 50u}) {
    const auto qs = queries_gen(p, i, rng);
    const auto item = extract(p, i, answer_all(p, db, qs), qs.aux);
    EXPECT_EQ(item[0][2], db.at(2, i - 1));
  }
}

TEST(CoefficientVectors, OpenTheHashAnswers) {
  Rng rng(14);
  for (const auto& p : all_params(20)) {
    const auto h = random_vec(p.columns(), rng);
    const auto qs = queries_gen(p, 1 + rng.uniform(20), rng);
    for (const auto& q : qs.queries) {
      const auto cs = coeff_vectors(p, q);
      const auto a = answer_gen(p, MatrixView::row(h), q);
      ASSERT_EQ(cs.size(), p.combinations());
      ASSERT_EQ(a.size(), p.combinations());
      for (std::size_t u = 0; u < cs.size(); ++u) {
        ASSERT_EQ(cs[u].size(), p.columns());
        EXPECT_EQ(dot(cs[u], h), a[u][0]) << label(p) << " u=" << u;
      }
    }
  }
}

TEST(Shapes, Errors) {
  const auto p = SchemeParams::make(SchemeId::kBe, 3, 1, 4);
  Rng rng(15);
  EXPECT_THROW(queries_gen(p, 0, rng), std::invalid_argument);
  EXPECT_THROW(queries_gen(p, 5, rng), std::invalid_argument);
  const auto db = Database::random(2, p.columns(), rng);
  Query bad{random_vec(3, rng)};
  EXPECT_THROW(answer_gen(p, MatrixView::of(db), bad), std::invalid_argument);
  EXPECT_THROW(coeff_vectors(p, bad), std::invalid_argument);
  const auto wrong_db = Database::random(2, 5, rng);
  const auto qs = queries_gen(p, 1, rng);
  EXPECT_THROW(answer_gen(p, MatrixView::of(wrong_db), qs.queries[0]), std::invalid_argument);
  auto answers = answer_all(p, db, qs);
  answers.pop_back();
  EXPECT_THROW(extract(p, 1, answers, qs.aux), std::invalid_argument);
  auto ragged = answer_all(p, db, qs);
  ragged[1][0].pop_back();
  EXPECT_THROW(extract(p, 1, ragged, qs.aux), std::invalid_argument);
  const auto c2 = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 4);
  const auto db2 = Database::random(1, 4, rng);
  const auto q2 = queries_gen(c2, 1, rng);
  Aux no_sign;
  EXPECT_THROW(extract(c2, 1, answer_all(c2, db2, q2), no_sign), std::invalid_argument);
}

}  // namespace
}  // namespace compir
