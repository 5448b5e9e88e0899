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

#include "compir/groupcore.hpp"
#include "test_util.hpp"

namespace compir {
namespace {

using testing::hex32;
using testing::scalar_hex;

constexpr std::string_view kModulusHex =
    "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";

TEST(Scalar, ModulusBytes) {
  EXPECT_EQ(scalar_modulus_bytes(), hex32(kModulusHex));
}

TEST(Scalar, EncodeDecodeRoundTrip) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Scalar s = rng.next_scalar();
    const auto b = s.to_bytes();
    EXPECT_EQ(Scalar::decode(b), s);
  }
  EXPECT_EQ(Scalar::decode(Scalar::zero().to_bytes()), Scalar::zero());
  EXPECT_EQ(Scalar::decode(Scalar::from_i64(-1).to_bytes()), Scalar::from_i64(-1));
}

TEST(Scalar, DecodeRejectsNonCanonical) {
  auto p = hex32(kModulusHex);
  EXPECT_FALSE(Scalar::from_canonical(p).has_value());
  EXPECT_THROW(Scalar::decode(p), DecodeError);
  p[31] += 1;  // p + 1
  EXPECT_FALSE(Scalar::from_canonical(p).has_value());
  std::array<std::uint8_t, 32> ff;
  ff.fill(0xFF);
  EXPECT_FALSE(Scalar::from_canonical(ff).has_value());
  // p - 1 is the largest canonical value.
  auto pm1 = hex32(kModulusHex);
  pm1[31] -= 1;
  ASSERT_TRUE(Scalar::from_canonical(pm1).has_value());
  EXPECT_EQ(*Scalar::from_canonical(pm1), Scalar::from_i64(-1));
  // Wrong length.
  std::array<std::uint8_t, 31> short_b{};
  EXPECT_THROW(Scalar::decode(short_b), DecodeError);
}

TEST(Scalar, FromWideBytes) {
  std::array<std::uint8_t, 32> zero{};
  EXPECT_EQ(Scalar::from_wide_bytes(zero), Scalar::zero());
  EXPECT_EQ(Scalar::from_wide_bytes(hex32(kModulusHex)), Scalar::zero());
  // SHA3-256("") reduced mod p, computed with Python hashlib and
  // arbitrary-precision integers.
  const auto digest = sha3_256({});
  EXPECT_EQ(digest,
            hex32("a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a"));
  EXPECT_EQ(Scalar::from_wide_bytes(digest),
            scalar_hex("34121fa595815a1e1e876f4e96bffe5da1c35b4ae43cedfb82d80a4c80f84349"));
  std::array<std::uint8_t, 32> ff;
  ff.fill(0xFF);
  // 2^256 - 1 mod p = 2^256 - 1 - 2p.
  const Scalar two_p_plus = Scalar::from_wide_bytes(ff);
  EXPECT_EQ(two_p_plus + Scalar::one(), Scalar::from_u64(2).pow(256));
}

TEST(Scalar, FieldArithmetic) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Scalar a = rng.next_scalar();
    const Scalar b = rng.next_scalar();
    const Scalar c = rng.next_scalar();
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a - b) + b, a);
    EXPECT_EQ(a + (-a), Scalar::zero());
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), Scalar::one());
    }
  }
  EXPECT_THROW(Scalar::zero().inverse(), std::domain_error);
  EXPECT_EQ(Scalar::from_u64(3).pow(4), Scalar::from_u64(81));
  EXPECT_EQ(Scalar::from_i64(-5) + Scalar::from_u64(5), Scalar::zero());
}

TEST(Scalar, CountersTrackOperations) {
  CounterScope scope;
  Scalar a = Scalar::from_u64(3);
  Scalar b = a * a;
  b = b + a;
  b = b - a;
  const auto d = scope.delta();
  EXPECT_EQ(d.field_mul, 1u);
  EXPECT_EQ(d.field_add, 2u);
}

TEST(Groups, EncodingSizesAndRoundTrip) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Scalar s = rng.next_scalar();
    const G1 a = G1::generator() * s;
    const G2 b = G2::generator() * s;
    const auto ea = a.compress();
    const auto eb = b.compress();
    EXPECT_EQ(ea.size(), 48u);
    EXPECT_EQ(eb.size(), 96u);
    EXPECT_EQ(G1::decompress(ea), a);
    EXPECT_EQ(G2::decompress(eb), b);
  }
  EXPECT_EQ(G1::decompress(G1::identity().compress()), G1::identity());
  EXPECT_EQ(G2::decompress(G2::identity().compress()), G2::identity());
}

TEST(Groups, DecompressRejectsGarbage) {
  std::array<std::uint8_t, 48> bad{};
  bad[0] = 0x80;  // compressed flag, x = 0 is not on the curve
  bad[47] = 0x00;
  bool threw = false;
  try {
    const G1 p = G1::decompress(bad);
    (void)p;
  } catch (const DecodeError&) {
    threw = true;
  }
  EXPECT_TRUE(threw);
  std::array<std::uint8_t, 48> missing_flag = G1::generator().compress();
  missing_flag[0] &= 0x7F;  // uncompressed flag on a 48-byte string
  EXPECT_THROW(G1::decompress(missing_flag), DecodeError);
  std::array<std::uint8_t, 10> short_b{};
  EXPECT_THROW(G1::decompress(short_b), DecodeError);
  EXPECT_THROW(G2::decompress(short_b), DecodeError);
}

TEST(Groups, DecompressEnforcesSubgroup) {
  // Search x = 1, 2, ... for a point on E(Fp) that is not in the order-p
  // subgroup; the cofactor makes almost every curve point such a point.
  int rejected = 0;
  for (std::uint8_t x = 1; x < 40 && rejected == 0; ++x) {
    std::array<std::uint8_t, 48> b{};
    b[0] = 0x80;
    b[47] = x;
    blst_p1_affine aff;
    if (blst_p1_uncompress(&aff, b.data()) != BLST_SUCCESS) continue;
    if (blst_p1_affine_in_g1(&aff)) continue;
    EXPECT_THROW(G1::decompress(b), DecodeError);
    ++rejected;
  }
  EXPECT_EQ(rejected, 1);
}

TEST(Msm, EmptyAndSingle) {
  EXPECT_TRUE(msm(std::span<const G1>{}, std::span<const Scalar>{}).is_identity());
  EXPECT_TRUE(msm(std::span<const G2>{}, std::span<const Scalar>{}).is_identity());
  const std::vector<G1> g{G1::generator()};
  const std::vector<Scalar> one{Scalar::one()};
  EXPECT_EQ(msm(g, one), G1::generator());
  const std::vector<Scalar> two{Scalar::one(), Scalar::one()};
  EXPECT_THROW(msm(g, two), std::invalid_argument);
}

template <typename G>
G naive_msm(const std::vector<G>& pts, const std::vector<Scalar>& s) {
  G acc;
  for (std::size_t i = 0; i < pts.size(); ++i) acc += pts[i] * s[i];
  return acc;
}

TEST(Msm, MatchesNaiveLoop) {
  Rng rng(99);
  for (std::size_t len : {1u, 2u, 3u, 5u, 16u, 31u, 64u, 100u, 256u}) {
    std::vector<G1> p1;
    std::vector<G2> p2;
    std::vector<Scalar> s;
    for (std::size_t i = 0; i < len; ++i) {
      p1.push_back(G1::generator() * rng.next_scalar());
      p2.push_back(G2::generator() * rng.next_scalar());
      s.push_back(rng.next_scalar());
    }
    if (len > 2) s[1] = Scalar::zero();
    EXPECT_EQ(msm(p1, s), naive_msm(p1, s)) << "len " << len;
    EXPECT_EQ(msm(p2, s), naive_msm(p2, s)) << "len " << len;
    const auto a1 = batch_to_affine(p1);
    EXPECT_EQ(msm(a1, s), naive_msm(p1, s));
  }
}

TEST(Pairing, NonDegenerateAndIdentity) {
  const GT g = pair(G1::generator(), G2::generator());
  EXPECT_FALSE(g.is_identity());
  EXPECT_TRUE(pair(G1::identity(), G2::generator()).is_identity());
  EXPECT_TRUE(pair(G1::generator(), G2::identity()).is_identity());
}

TEST(Pairing, Bilinearity) {
  Rng rng(2024);
  const GT base = pair(G1::generator(), G2::generator());
  for (int i = 0; i < 100; ++i) {
    const Scalar x = rng.next_scalar();
    const Scalar y = rng.next_scalar();
    EXPECT_EQ(pair(G1::generator() * x, G2::generator() * y), base.pow(x * y));
  }
}

TEST(Pairing, ProductIsIdentity) {
  Rng rng(3);
  const Scalar x = rng.next_scalar();
  const Scalar y = rng.next_scalar();
  // e(xG1, yG2) * e(-xyG1, G2) == 1
  const std::vector<G1> as{G1::generator() * x, -(G1::generator() * (x * y))};
  const std::vector<G2> bs{G2::generator() * y, G2::generator()};
  EXPECT_TRUE(pairing_product_is_identity(as, bs));
  const std::vector<G1> as_bad{G1::generator() * x, -(G1::generator() * (x * y + Scalar::one()))};
  EXPECT_FALSE(pairing_product_is_identity(as_bad, bs));
}

TEST(Rng, DeterministicAndForkIndependent) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng d(42);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs |= d.next_u64() != c.next_u64();
  EXPECT_TRUE(differs);
  Rng e(1);
  Rng f = e.fork();
  EXPECT_NE(e.next_u64(), f.next_u64());
  for (int i = 0; i < 1000; ++i) EXPECT_LT(e.uniform(7), 7u);
}

TEST(Sha3, IncrementalMatchesOneShot) {
  const std::string msg = "the quick brown fox";
  const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(msg.data()),
                                            msg.size());
  Sha3Hasher h;
  h.update(bytes.first(5));
  h.update(bytes.subspan(5));
  EXPECT_EQ(h.finish(), sha3_256(bytes));
}

}  // namespace
}  // namespace compir
