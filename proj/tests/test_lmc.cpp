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

#include "compir/lmc.hpp"
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

// Literal double loop over j != j', one G2 exponentiation per term.
G2 naive_witness(const PublicParams& pp, const std::vector<Scalar>& v,
                 const std::vector<Scalar>& c, bool printed_index = false) {
  const std::size_t n = pp.n();
  G2 w;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t jp = 1; jp <= n; ++jp) {
      if (j == jp) continue;
      const std::size_t e = printed_index ? n + 1 + j - jp : n + 1 - j + jp;
      w += G2(pp.g2_power(e)) * (c[j - 1] * v[jp - 1]);
    }
  }
  return w;
}

TEST(LmcSetup, Shapes) {
  Rng rng(1);
  for (std::size_t n : {1u, 2u, 7u}) {
    const auto pp = PublicParams::setup(n, rng);
    EXPECT_EQ(pp.n(), n);
    EXPECT_EQ(pp.g1_powers().size(), n);
    EXPECT_EQ(pp.g2_stored().size(), 2 * n - 1);
    EXPECT_THROW(pp.g2_power(n + 1), std::out_of_range);
    EXPECT_THROW(pp.g2_power(0), std::out_of_range);
    EXPECT_THROW(pp.g2_power(2 * n + 1), std::out_of_range);
    EXPECT_THROW(pp.g1_power(0), std::out_of_range);
    EXPECT_THROW(pp.g1_power(n + 1), std::out_of_range);
  }
  EXPECT_THROW(PublicParams::setup(0, rng), std::invalid_argument);
}

TEST(LmcSetup, KnownSecretPowers) {
  const auto pp = PublicParams::setup_with_secret(3, Scalar::from_u64(2));
  for (std::size_t j = 1; j <= 3; ++j) {
    EXPECT_EQ(G1(pp.g1_power(j)), G1::generator() * Scalar::from_u64(1ull << j));
  }
  for (std::size_t j : {1u, 2u, 3u, 5u, 6u}) {
    EXPECT_EQ(G2(pp.g2_power(j)), G2::generator() * Scalar::from_u64(1ull << j));
  }
  EXPECT_EQ(pp.g2_slot(5), 3u);
  EXPECT_THROW(pp.g2_slot(4), std::out_of_range);
}

TEST(LmcSetup, PairingAcrossTheHole) {
  const auto pp = PublicParams::setup_with_secret(3, Scalar::from_u64(2));
  // e(G1^{a^1}, G2^{a^5}) == e(G1^{a^3}, G2^{a^3}): exponents 6 straddle 4.
  EXPECT_EQ(pair(G1(pp.g1_power(1)), G2(pp.g2_power(5))),
            pair(G1(pp.g1_power(3)), G2(pp.g2_power(3))));
  Rng rng(9);
  EXPECT_TRUE(pp.spot_check(rng, 20));
}

TEST(LmcSetup, SpotCheckCatchesCorruptPower) {
  Rng rng(4);
  const auto pp = PublicParams::setup(4, rng);
  Bytes b = pp.serialize();
  const std::size_t g2_start = 9 + 4 * kG1Bytes;
  const auto bogus = (G2::generator() * Scalar::from_u64(5)).compress();
  std::copy(bogus.begin(), bogus.end(), b.begin() + g2_start + 2 * kG2Bytes);
  const auto bad = PublicParams::deserialize(b);
  Rng check(5);
  EXPECT_FALSE(bad.spot_check(check, 64));
}

TEST(LmcSetup, SerializationRoundTrip) {
  Rng rng(2);
  const auto pp = PublicParams::setup(5, rng);
  const Bytes b = pp.serialize();
  EXPECT_EQ(b.size(), 9 + 5 * kG1Bytes + 9 * kG2Bytes);
  EXPECT_TRUE(PublicParams::deserialize(b) == pp);
  Bytes truncated(b.begin(), b.end() - 1);
  EXPECT_THROW(PublicParams::deserialize(truncated), DecodeError);
  Bytes magic = b;
  magic[0] = 'X';
  EXPECT_THROW(PublicParams::deserialize(magic), DecodeError);
}

TEST(LmcCommit, BasisAndZero) {
  Rng rng(3);
  const auto pp = PublicParams::setup(4, rng);
  EXPECT_TRUE(lmc_commit(pp, std::vector<Scalar>(4)).point.is_identity());
  for (std::size_t j = 1; j <= 4; ++j) {
    std::vector<Scalar> e(4);
    e[j - 1] = Scalar::one();
    EXPECT_EQ(lmc_commit(pp, e).point, G1(pp.g1_power(j)));
  }
  EXPECT_THROW(lmc_commit(pp, std::vector<Scalar>(3)), std::invalid_argument);
  // Known secret: C = G1^{sum v_j 2^j}.
  const auto pp2 = PublicParams::setup_with_secret(3, Scalar::from_u64(2));
  EXPECT_EQ(lmc_commit(pp2, ints({1, 1, 1})).point, G1::generator() * Scalar::from_u64(14));
  EXPECT_EQ(lmc_commit(pp, random_vec(4, rng)).encode().size(), 48u);
}

TEST(LmcProduct, WorkedExample) {
  // f_c = z^2 + 2z, f_v = 3z + 4z^2; product 6z^2 + 11z^3 + 4z^4.
  const auto c = ints({1, 2});
  const auto v = ints({3, 4});
  EXPECT_EQ(polynomial_product(c, v), ints({0, 6, 11, 4}));
  EXPECT_EQ(lmc_prod_coeffs(c, v), ints({0, 6, 0, 4}));
}

TEST(LmcProduct, UnitAndZero) {
  // c = e_1: f_c = z^n, so the product is z^n f_v.
  const std::size_t n = 4;
  Rng rng(8);
  const auto v = random_vec(n, rng);
  std::vector<Scalar> e1(n);
  e1[0] = Scalar::one();
  const auto p = polynomial_product(e1, v);
  ASSERT_EQ(p.size(), 2 * n);
  for (std::size_t e = 1; e <= 2 * n; ++e) {
    const Scalar expect = (e > n && e - n <= n) ? v[e - n - 1] : Scalar::zero();
    EXPECT_EQ(p[e - 1], expect) << "z^" << e;
  }
  for (const auto& x : lmc_prod_coeffs(random_vec(n, rng), std::vector<Scalar>(n))) {
    EXPECT_TRUE(x.is_zero());
  }
}

TEST(LmcProduct, MiddleCoefficientIsInnerProduct) {
  Rng rng(12);
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto c = random_vec(n, rng);
    const auto v = random_vec(n, rng);
    const auto p = polynomial_product(c, v);
    EXPECT_EQ(p[n], dot(c, v));
    EXPECT_TRUE(lmc_prod_coeffs(c, v)[n].is_zero());
  }
}

TEST(LmcWitness, MatchesDoubleLoop) {
  Rng rng(21);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u}) {
    const auto pp = PublicParams::setup(n, rng);
    for (int trial = 0; trial < 3; ++trial) {
      const auto v = random_vec(n, rng);
      auto c = random_vec(n, rng);
      if (trial == 1) c[0] = Scalar::zero();
      EXPECT_EQ(lmc_witness(pp, v, c).point, naive_witness(pp, v, c)) << "n=" << n;
    }
  }
}

TEST(LmcWitness, MirroredIndexFailsVerification) {
  // The exponent n+1+j-j' (indices mirrored) does not give a valid opening.
  Rng rng(22);
  const std::size_t n = 4;
  const auto pp = PublicParams::setup(n, rng);
  const auto v = random_vec(n, rng);
  const auto c = random_vec(n, rng);
  const auto com = lmc_commit(pp, v);
  const Witness honest{naive_witness(pp, v, c)};
  EXPECT_TRUE(lmc_verify(pp, com, c, dot(c, v), honest));
  // n+1+j-j' ranges over [2, 2n] without the hole, so it is computable.
  const Witness mirrored{naive_witness(pp, v, c, true)};
  EXPECT_FALSE(lmc_verify(pp, com, c, dot(c, v), mirrored));
}

TEST(LmcVerify, HonestOpeningsAccepted) {
  Rng rng(31);
  for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 16u, 33u, 64u}) {
    const auto pp = PublicParams::setup(n, rng);
    const auto v = random_vec(n, rng);
    const auto c = random_vec(n, rng);
    const auto com = lmc_commit(pp, v);
    const auto w = lmc_witness(pp, v, c);
    EXPECT_TRUE(lmc_verify(pp, com, c, dot(c, v), w)) << "n=" << n;
  }
}

TEST(LmcVerify, UsesThreePairings) {
  Rng rng(32);
  const auto pp = PublicParams::setup(4, rng);
  const auto v = random_vec(4, rng);
  const auto c = random_vec(4, rng);
  const auto com = lmc_commit(pp, v);
  const auto w = lmc_witness(pp, v, c);
  CounterScope scope;
  EXPECT_TRUE(lmc_verify(pp, com, c, dot(c, v), w));
  EXPECT_EQ(scope.delta().pairings, 3u);
}

TEST(LmcVerify, WrongValueRejected) {
  Rng rng(33);
  const auto pp = PublicParams::setup(6, rng);
  const auto v = random_vec(6, rng);
  const auto c = random_vec(6, rng);
  const auto com = lmc_commit(pp, v);
  const auto w = lmc_witness(pp, v, c);
  const Scalar y = dot(c, v);
  EXPECT_FALSE(lmc_verify(pp, com, c, y + Scalar::one(), w));
  EXPECT_FALSE(lmc_verify(pp, com, c, y, Witness{w.point + G2::generator()}));
  auto c2 = c;
  c2[2] += Scalar::one();
  EXPECT_FALSE(lmc_verify(pp, com, c2, y, w));
  EXPECT_FALSE(lmc_verify(pp, com, std::vector<Scalar>(5), y, w));
}

TEST(LmcVerify, RangeCheckOnEncodedValue) {
  Rng rng(34);
  const auto pp = PublicParams::setup(3, rng);
  const auto v = random_vec(3, rng);
  const auto c = random_vec(3, rng);
  const auto com = lmc_commit(pp, v);
  const auto w = lmc_witness(pp, v, c);
  const Scalar y = dot(c, v);
  const auto yb = y.to_bytes();
  EXPECT_TRUE(lmc_verify(pp, com, c, std::span<const std::uint8_t>(yb), w));
  // y + p encodes the same residue; only the range check rejects it, and
  // only when y + p still fits in 256 bits.
  Scalar small = y;
  std::array<std::uint8_t, 32> shifted{};
  unsigned carry = 0;
  const auto& p = scalar_modulus_bytes();
  for (int i = 31; i >= 0; --i) {
    const unsigned s = unsigned(yb[i]) + p[i] + carry;
    shifted[i] = static_cast<std::uint8_t>(s);
    carry = s >> 8;
  }
  if (carry == 0) {
    EXPECT_EQ(Scalar::reduce_be(shifted), small);
    EXPECT_FALSE(lmc_verify(pp, com, c, std::span<const std::uint8_t>(shifted), w));
  }
  // p itself and 2^256 - 1 are never in Z_p.
  EXPECT_FALSE(lmc_verify(pp, com, c, std::span<const std::uint8_t>(p), w));
  std::array<std::uint8_t, 32> ff;
  ff.fill(0xFF);
  EXPECT_FALSE(lmc_verify(pp, com, c, std::span<const std::uint8_t>(ff), w));
}

TEST(LmcVerify, RangeCheckOnValueNearZero) {
  // y = 0 so that y + p fits; verify must reject the p-shifted encoding.
  Rng rng(35);
  const auto pp = PublicParams::setup(2, rng);
  const auto v = ints({1, 0});
  const auto c = ints({0, 1});
  const auto com = lmc_commit(pp, v);
  const auto w = lmc_witness(pp, v, c);
  EXPECT_TRUE(lmc_verify(pp, com, c, Scalar::zero(), w));
  EXPECT_FALSE(lmc_verify(pp, com, c, std::span<const std::uint8_t>(scalar_modulus_bytes()), w));
}

TEST(LmcBinding, RandomWrongValuesRejected) {
  Rng rng(41);
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const auto pp = PublicParams::setup(n, rng);
    const auto v = random_vec(n, rng);
    const auto com = lmc_commit(pp, v);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = random_vec(n, rng);
      const auto w = lmc_witness(pp, v, c);
      Scalar y = rng.next_scalar();
      if (y == dot(c, v)) y += Scalar::one();
      EXPECT_FALSE(lmc_verify(pp, com, c, y, w)) << "n=" << n;
    }
  }
}

TEST(LmcBatch, AggregatedOpening) {
  Rng rng(51);
  const std::size_t n = 8;
  const auto pp = PublicParams::setup(n, rng);
  const auto v = random_vec(n, rng);
  const auto com = lmc_commit(pp, v);
  for (std::size_t L : {1u, 3u}) {
    std::vector<std::vector<Scalar>> cs;
    std::vector<Scalar> ys;
    for (std::size_t u = 0; u < L; ++u) {
      cs.push_back(random_vec(n, rng));
      ys.push_back(dot(cs.back(), v));
    }
    const auto r = lmc_batch_challenge(com, cs, ys);
    ASSERT_EQ(r.size(), L);
    const auto agg = lmc_aggregate(cs, ys, r);
    Scalar y_expect;
    for (std::size_t u = 0; u < L; ++u) y_expect += r[u] * ys[u];
    EXPECT_EQ(agg.y, y_expect);
    EXPECT_EQ(agg.y, dot(agg.c, v));
    const auto w = lmc_witness(pp, v, agg.c);
    EXPECT_TRUE(lmc_verify(pp, com, agg.c, agg.y, w));
    // Challenge depends on every claimed value.
    auto ys2 = ys;
    ys2[0] += Scalar::one();
    EXPECT_NE(lmc_batch_challenge(com, cs, ys2), r);
  }
  EXPECT_THROW(lmc_batch_challenge(com, {}, {}), std::invalid_argument);
}

TEST(LmcBatch, TamperedValueRejected) {
  Rng rng(52);
  const std::size_t n = 4, L = 3;
  const auto pp = PublicParams::setup(n, rng);
  const auto v = random_vec(n, rng);
  const auto com = lmc_commit(pp, v);
  std::vector<std::vector<Scalar>> cs;
  std::vector<Scalar> ys;
  for (std::size_t u = 0; u < L; ++u) {
    cs.push_back(random_vec(n, rng));
    ys.push_back(dot(cs.back(), v));
  }
  const auto r0 = lmc_batch_challenge(com, cs, ys);
  const auto w = lmc_witness(pp, v, lmc_aggregate(cs, ys, r0).c);
  int rejected = 0;
  const int trials = 200;
  for (int i = 0; i < trials; ++i) {
    auto bad = ys;
    bad[rng.uniform(L)] += rng.next_scalar();
    const auto r = lmc_batch_challenge(com, cs, bad);
    const auto agg = lmc_aggregate(cs, bad, r);
    rejected += lmc_verify(pp, com, agg.c, agg.y, w) ? 0 : 1;
  }
  EXPECT_EQ(rejected, trials);
}

TEST(LmcEncoding, CommitmentAndWitnessRoundTrip) {
  Rng rng(61);
  const auto pp = PublicParams::setup(3, rng);
  const auto v = random_vec(3, rng);
  const auto com = lmc_commit(pp, v);
  const auto w = lmc_witness(pp, v, random_vec(3, rng));
  EXPECT_EQ(Commitment::decode(com.encode()), com);
  EXPECT_EQ(Witness::decode(w.encode()), w);
  EXPECT_EQ(w.encode().size(), 96u);
}

}  // namespace
}  // namespace compir
