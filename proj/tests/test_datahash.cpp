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

#include <set>

#include <gtest/gtest.h>

#include "compir/datahash.hpp"
#include "test_util.hpp"

namespace compir {
namespace {

using testing::hex32;
using testing::random_vec;
using testing::scalar_hex;

std::vector<Scalar> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Scalar> out;
  for (auto x : xs) out.push_back(Scalar::from_i64(x));
  return out;
}

// Expected values computed with Python's hashlib.sha3_256 over the
// concatenated 32-byte big-endian entries, then int(...) % p.
TEST(HashItem, KnownVectors) {
  struct Case {
    std::vector<Scalar> col;
    std::string_view expect;
  };
  std::vector<Scalar> sixty_five(65, Scalar::from_u64(42));
  std::vector<Scalar> squares;
  for (std::uint64_t i = 0; i < 130; ++i) squares.push_back(Scalar::from_u64(i * i));
  const std::vector<Case> cases = {
      {ints({0}), "2a74ea43e316d0910cceef93c1580069c4f71098a5b4444881db719aed3b9e4d"},
      {ints({1}), "43a3aa9933932ac3453ebffde8f2224a653f7ae8c0cada7f7c9106688a893df0"},
      {ints({2, 3}), "1ca74d268febf91645c1c0fbfbfa7bfd2c2422a9bae5fb9a395dec17eca4a6b"},
      {ints({-1}), "5c8c737bb427ecfce4f3815c605c5bbbce74751bf378806cda02c81dc9b5cc86"},
      {ints({0, 0, 0}), "500244c1b7be5605db8823c323ddb019a28eeb41450bddffc3a2e57329bbf188"},
      {{Scalar::from_u64(12345678901234567890ull)},
       "dcd4ff781147c5550785a7c69933633d1d5c262257ea9ef2b769c4d83fdae47"},
      {ints({1, 2, 3, 4, 5, 6, 7, 8}),
       "37460b4f1692e77aac26ded7ae843602da4a25bd1a34e4368df6aa6ba6a5e9f1"},
      {{scalar_hex("100000000000000000000000000000000000000000000000007")},
       "393d71d7581f94f73c3f1855699ba0de200f78e8c2412cd480b555fc3cfd6c08"},
      {ints({-1, -2}), "ddf097d668a5973553cb6416f2977179228a9dad94da966c248ac3034132d81"},
      {sixty_five, "4592a5f346202e4b09c618a9139a21cdbdafea3aac24fae01b19e0708cb4c68f"},
      {squares, "56fcfbe39ed8d1bc2a446f83fc2ee4c7be730d28e16d20f4b8c5ee1d6e708d3d"},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(hash_item(c.col), scalar_hex(c.expect)) << c.expect;
  }
  EXPECT_THROW(hash_item({}), std::invalid_argument);
}

TEST(HashItem, Deterministic) {
  Rng rng(1);
  const auto col = random_vec(17, rng);
  EXPECT_EQ(hash_item(col), hash_item(col));
  auto other = col;
  other[16] += Scalar::one();
  EXPECT_NE(hash_item(col), hash_item(other));
  // Order matters.
  auto swapped = col;
  std::swap(swapped[0], swapped[1]);
  EXPECT_NE(hash_item(col), hash_item(swapped));
}

TEST(HashItem, NoCollisionsInRandomTrials) {
  Rng rng(2);
  std::set<std::string> seen;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const auto col = random_vec(1 + rng.uniform(3), rng);
    seen.insert(hash_item(col).to_hex());
  }
  EXPECT_EQ(seen.size(), static_cast<std::size_t>(trials));
}

// A 256-bit digest is below 3p, so reduction subtracts p at most twice.
TEST(HashItem, DigestBelowThreeP) {
  // 3p > 2^256 - 1: compare 256-bit big-endian values via a 257-bit add.
  const auto& p = scalar_modulus_bytes();
  unsigned carry = 0;
  std::array<std::uint8_t, 32> two_p{};
  for (int i = 31; i >= 0; --i) {
    const unsigned s = 2u * p[i] + carry;
    two_p[i] = static_cast<std::uint8_t>(s);
    carry = s >> 8;
  }
  ASSERT_EQ(carry, 0u);  // 2p < 2^256
  carry = 0;
  for (int i = 31; i >= 0; --i) carry = (unsigned(two_p[i]) + p[i] + carry) >> 8;
  EXPECT_EQ(carry, 1u);  // 3p >= 2^256

  // Digests in [2p, 2^256) occur, at rate (2^256 - 2p) / 2^256 ~ 9.4%.
  Rng rng(3);
  int above_2p = 0;
  for (int i = 0; i < 2000; ++i) {
    std::array<std::uint8_t, 32> buf;
    rng.fill(buf);
    const auto d = sha3_256(buf);
    if (std::lexicographical_compare(two_p.begin(), two_p.end(), d.begin(), d.end()) ||
        d == two_p) {
      ++above_2p;
    }
  }
  EXPECT_GT(above_2p, 100);
  EXPECT_LT(above_2p, 300);
}

TEST(HashItem, ReductionOfDigestsAboveTwoP) {
  // 2^256 - 1 reduces to 2^256 - 1 - 2p.
  std::array<std::uint8_t, 32> ff;
  ff.fill(0xFF);
  const Scalar r = Scalar::from_wide_bytes(ff);
  EXPECT_EQ(r, Scalar::from_u64(2).pow(256) - Scalar::one());
  EXPECT_EQ(Scalar::reduce_be(ff), r);
}

TEST(Database, HashDatabaseMatchesPerColumn) {
  Rng rng(4);
  const auto db = Database::random(5, 7, rng);
  const auto h = hash_database(db);
  ASSERT_EQ(h.size(), 7u);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(h[j], hash_item(db.column(j)));
}

TEST(Database, PermutingColumnsPermutesHashes) {
  Rng rng(5);
  const auto db = Database::random(3, 6, rng);
  std::vector<Scalar> cells;
  const std::vector<std::size_t> perm = {3, 0, 5, 1, 4, 2};
  for (auto j : perm) {
    for (const auto& s : db.column(j)) cells.push_back(s);
  }
  const Database permuted(3, 6, cells);
  const auto h = hash_database(db);
  const auto hp = hash_database(permuted);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(hp[j], h[perm[j]]);
}

TEST(Database, SingleColumnAndShape) {
  Rng rng(6);
  const auto db = Database::random(4, 1, rng);
  EXPECT_EQ(hash_database(db).size(), 1u);
  EXPECT_THROW(Database(2, 2, std::vector<Scalar>(3)), std::invalid_argument);
  Database d(2, 3);
  d.at(1, 2) = Scalar::from_u64(9);
  EXPECT_EQ(d.column(2)[1], Scalar::from_u64(9));
  EXPECT_EQ(d.cells()[5], Scalar::from_u64(9));
}

TEST(Database, SerializationRoundTrip) {
  Rng rng(7);
  const auto db = Database::random(3, 4, rng);
  const Bytes b = db.serialize();
  EXPECT_EQ(b.size(), 13 + 12 * kScalarBytes);
  EXPECT_TRUE(Database::deserialize(b) == db);
  Bytes bad = b;
  // Make one cell non-canonical (all 0xFF).
  std::fill(bad.begin() + 13, bad.begin() + 13 + 32, 0xFF);
  EXPECT_THROW(Database::deserialize(bad), DecodeError);
  Bytes extra = b;
  extra.push_back(0);
  EXPECT_THROW(Database::deserialize(extra), DecodeError);
}

}  // namespace
}  // namespace compir
