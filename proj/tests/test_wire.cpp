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

#include "compir/serial.hpp"
#include "compir/wire.hpp"
#include "golden_cases.hpp"
#include "test_util.hpp"

namespace compir {
namespace {

using testing::random_vec;

std::vector<Scalar> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Scalar> out;
  for (auto x : xs) out.push_back(Scalar::from_i64(x));
  return out;
}

std::vector<SchemeParams> sample_params(std::size_t n) {
  return {SchemeParams::make(SchemeId::kCkgs2, 2, 1, n),
          SchemeParams::make(SchemeId::kCkgsK, 4, 3, n),
          SchemeParams::make(SchemeId::kWy, 3, 1, n),
          SchemeParams::make(SchemeId::kBe, 5, 2, n)};
}

ErrorCode error_code_of(const Bytes& frame) {
  const Frame f = decode_frame(frame);
  EXPECT_EQ(f.type, static_cast<std::uint8_t>(FrameType::kError));
  return decode_error_payload(f.payload).code;
}

TEST(Frame, Layout) {
  const Bytes payload = {0xAA, 0xBB};
  const Bytes f = encode_frame(0x01, payload);
  EXPECT_EQ(f, (Bytes{0, 0, 0, 3, 0x01, 0xAA, 0xBB}));
  const Frame back = decode_frame(f);
  EXPECT_EQ(back.type, 0x01);
  EXPECT_EQ(back.payload, payload);
  EXPECT_EQ(encode_frame(0x7F, {}), (Bytes{0, 0, 0, 1, 0x7F}));
}

TEST(Frame, Errors) {
  const Bytes zero = {0, 0, 0, 0, 1};
  EXPECT_THROW(decode_frame(zero), WireError);
  const Bytes short_header = {0, 0, 1};
  EXPECT_THROW(decode_frame(short_header), WireError);
  const Bytes mismatch = {0, 0, 0, 5, 1, 0};
  EXPECT_THROW(decode_frame(mismatch), WireError);
  const Bytes payload(100);
  try {
    encode_frame(0x02, payload, 50);
    FAIL() << "no oversize error";
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOversize);
  }
  const Bytes big_header = {0x04, 0, 0, 1, 1};
  try {
    decode_frame(big_header);
    FAIL() << "no oversize error";
  } catch (const WireError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOversize);
  }
}

TEST(Query, Ckgs2BitPacking) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5);
  const Query q{ints({1, 0, 1, 1, 0})};
  const Bytes payload = encode_query_payload(p, 0, 3, q);
  ASSERT_EQ(payload.size(), 12u + 1u);
  EXPECT_EQ(payload[12], 0b10110000);
  EXPECT_EQ(Bytes(payload.begin(), payload.begin() + 12),
            (Bytes{1, 2, 1, 0, 0, 0, 0, 5, 0, 0, 0, 3}));
  const auto msg = decode_query_payload(payload);
  EXPECT_EQ(msg.query, q);
  EXPECT_EQ(msg.params, p);
  EXPECT_EQ(msg.m, 3u);
  EXPECT_EQ(msg.server_index, 0u);
  EXPECT_THROW(encode_query_payload(p, 0, 1, Query{ints({1, 0, 2, 1, 0})}),
               std::invalid_argument);
}

TEST(Query, Ckgs2PaddingMustBeZero) {
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5);
  Bytes payload = encode_query_payload(p, 1, 1, Query{ints({1, 0, 1, 1, 0})});
  payload[12] |= 0x01;
  EXPECT_THROW(decode_query_payload(payload), WireError);
}

TEST(Query, Ckgs2BodySize) {
  for (std::size_t n : {1u, 7u, 8u, 9u, 64u, 1000u}) {
    const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, n);
    EXPECT_EQ(query_body_bytes(p), (n + 7) / 8);
    Rng rng(n);
    const auto qs = queries_gen(p, 1, rng);
    EXPECT_EQ(encode_query_payload(p, 0, 1, qs.queries[0]).size(), 12 + (n + 7) / 8);
  }
  // Two servers, n = 64: 2n bits of query body.
  const auto p = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 64);
  EXPECT_EQ(2 * query_body_bytes(p) * 8, 2u * 64u);
}

TEST(Query, RoundTripEveryScheme) {
  Rng rng(1);
  for (std::size_t n : {1u, 5u, 33u}) {
    for (const auto& p : sample_params(n)) {
      for (int trial = 0; trial < 5; ++trial) {
        const auto qs = queries_gen(p, 1 + rng.uniform(n), rng);
        for (std::size_t j = 0; j < p.k; ++j) {
          const Bytes frame = encode_query(p, j, 7, qs.queries[j]);
          const Frame f = decode_frame(frame);
          EXPECT_EQ(f.type, 0x01);
          const auto msg = decode_query_payload(f.payload);
          EXPECT_EQ(msg.params, p);
          EXPECT_EQ(msg.server_index, j);
          EXPECT_EQ(msg.m, 7u);
          EXPECT_EQ(msg.query, qs.queries[j]);
          EXPECT_EQ(f.payload.size(), 12 + query_body_bytes(p));
        }
      }
    }
  }
}

TEST(Query, BodySizes) {
  EXPECT_EQ(query_body_bytes(SchemeParams::make(SchemeId::kCkgsK, 3, 2, 10)), 320u);
  EXPECT_EQ(query_body_bytes(SchemeParams::make(SchemeId::kWy, 2, 1, 1024)), 20u * 32u);
  EXPECT_EQ(query_body_bytes(SchemeParams::make(SchemeId::kBe, 4, 1, 10)), 30u * 32u);
}

TEST(Query, MalformedPayloads) {
  const auto p = SchemeParams::make(SchemeId::kCkgsK, 3, 2, 2);
  Rng rng(2);
  const auto qs = queries_gen(p, 1, rng);
  const Bytes good = encode_query_payload(p, 2, 1, qs.queries[2]);
  auto expect_malformed = [](const Bytes& b) {
    try {
      decode_query_payload(b);
      ADD_FAILURE() << "accepted";
    } catch (const WireError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformed);
    }
  };
  Bytes b = good;
  b[0] = 9;  // scheme
  expect_malformed(b);
  b = good;
  b[2] = 1;  // ckgsk with t != k-1
  expect_malformed(b);
  b = good;
  b[3] = 3;  // server index >= k
  expect_malformed(b);
  b = good;
  b[11] = 0;  // m = 0
  expect_malformed(b);
  b = good;
  b.pop_back();
  expect_malformed(b);
  b = good;
  b.push_back(0);
  expect_malformed(b);
  b = good;
  std::fill(b.begin() + 12, b.begin() + 44, 0xFF);  // entry >= p
  expect_malformed(b);
  expect_malformed(Bytes{1, 2});
}

AnswerBundle sample_bundle(Rng& rng, std::size_t L, std::size_t m, WitnessMode mode) {
  AnswerBundle b;
  for (std::size_t u = 0; u < L; ++u) b.data.push_back(random_vec(m, rng));
  b.hashes = random_vec(L, rng);
  b.mode = mode;
  const std::size_t w = mode == WitnessMode::kBatched ? 1 : L;
  for (std::size_t u = 0; u < w; ++u) b.witnesses.push_back(Witness{G2::generator() * rng.next_scalar()});
  return b;
}

TEST(Answer, RoundTripAndLayout) {
  Rng rng(3);
  for (auto [L, m] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 16}, {5, 3}}) {
    for (auto mode : {WitnessMode::kPerCombination, WitnessMode::kBatched}) {
      const auto b = sample_bundle(rng, L, m, mode);
      const Bytes payload = encode_answer_payload(b);
      const std::size_t w = b.witnesses.size();
      EXPECT_EQ(payload.size(), 4 + L * m * 32 + L * 32 + 1 + w * 96);
      EXPECT_EQ(load_u32(payload.data()), L);
      EXPECT_EQ(payload[4 + L * m * 32 + L * 32], static_cast<std::uint8_t>(mode));
      EXPECT_EQ(decode_answer_payload(payload, m), b);
      const Frame f = decode_frame(encode_answer(b));
      EXPECT_EQ(f.type, 0x02);
      EXPECT_EQ(f.payload, payload);
    }
  }
}

TEST(Answer, MalformedPayloads) {
  Rng rng(4);
  const auto b = sample_bundle(rng, 2, 2, WitnessMode::kPerCombination);
  const Bytes good = encode_answer_payload(b);
  auto expect_malformed = [](const Bytes& x, std::size_t m) {
    try {
      decode_answer_payload(x, m);
      ADD_FAILURE() << "accepted";
    } catch (const WireError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformed);
    }
  };
  Bytes x = good;
  std::fill(x.begin() + 4, x.begin() + 36, 0xFF);  // non-canonical data scalar
  expect_malformed(x, 2);
  x = good;
  x[4 + 2 * 2 * 32 + 2 * 32] = 2;  // witness mode
  expect_malformed(x, 2);
  x = good;
  x.pop_back();  // witness block not a multiple of 96
  expect_malformed(x, 2);
  x = good;
  x[x.size() - 96] ^= 0x20;  // flips the sign/infinity bits of a point
  x[x.size() - 50] ^= 0x55;
  expect_malformed(x, 2);
  x = good;
  x[3] = 0;  // L = 0
  expect_malformed(x, 2);
  x = good;
  x[3] = 200;  // L larger than the payload
  expect_malformed(x, 2);
  expect_malformed(good, 0);
  expect_malformed(Bytes{0, 0}, 1);
}

TEST(ErrorFrame, RoundTrip) {
  const Bytes f = encode_error(ErrorCode::kDimension, "n mismatch");
  const Frame back = decode_frame(f);
  EXPECT_EQ(back.type, 0x7F);
  const auto e = decode_error_payload(back.payload);
  EXPECT_EQ(e.code, ErrorCode::kDimension);
  EXPECT_EQ(e.message, "n mismatch");
  EXPECT_THROW(decode_error_payload(Bytes{}), WireError);
}

class HandleRequest : public ::testing::Test {
 protected:
  void SetUp() override {
    Rng rng(5);
    params_ = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 16);
    pp_.emplace(compir_setup(params_, rng));
    db_.emplace(Database::random(3, 16, rng));
    ctx_.emplace(*pp_, *db_);
    qs_ = queries_gen(params_, 4, rng);
  }

  SchemeParams params_;
  std::optional<PublicParams> pp_;
  std::optional<Database> db_;
  std::optional<ServerContext> ctx_;
  QuerySet qs_;
};

TEST_F(HandleRequest, AnswerShape) {
  const Bytes req = encode_query_payload(params_, 0, 3, qs_.queries[0]);
  const Frame f = decode_frame(handle_request(*ctx_, 0x01, req));
  ASSERT_EQ(f.type, 0x02);
  EXPECT_EQ(f.payload.size(), 4 + 3 * 32 + 32 + 1 + 96u);
  const auto b = decode_answer_payload(f.payload, 3);
  EXPECT_EQ(b, compir_answer(*ctx_, params_, qs_.queries[0]));
}

TEST_F(HandleRequest, ErrorCodes) {
  EXPECT_EQ(error_code_of(handle_request(*ctx_, 0x02, Bytes{})), ErrorCode::kMalformed);
  EXPECT_EQ(error_code_of(handle_request(*ctx_, 0x01, Bytes{1, 2, 3})), ErrorCode::kMalformed);
  // n that does not match the database.
  const auto p8 = SchemeParams::make(SchemeId::kCkgs2, 2, 1, 8);
  Query q8{std::vector<Scalar>(8)};
  EXPECT_EQ(error_code_of(handle_request(*ctx_, 0x01, encode_query_payload(p8, 0, 3, q8))),
            ErrorCode::kDimension);
  // m that does not match the database.
  EXPECT_EQ(error_code_of(handle_request(*ctx_, 0x01,
                                         encode_query_payload(params_, 0, 4, qs_.queries[0]))),
            ErrorCode::kDimension);
  // Reply larger than the frame limit.
  EXPECT_EQ(error_code_of(handle_request(
                *ctx_, 0x01, encode_query_payload(params_, 0, 3, qs_.queries[0]), 100)),
            ErrorCode::kOversize);
}

TEST(DownloadRate, BlockSchemePayload) {
  // Data answers are k scalars per row; the block is k-t of them.
  Rng rng(6);
  for (std::size_t k = 2; k <= 5; ++k) {
    for (std::size_t t = 1; t < k; ++t) {
      const auto p = SchemeParams::make(SchemeId::kBe, k, t, 3);
      const std::size_t m = 4;
      const auto pp = compir_setup(p, rng);
      const auto db = Database::random(m, p.columns(), rng);
      const ServerContext ctx(pp, db);
      const auto qs = queries_gen(p, 2, rng);
      std::size_t data_bytes = 0;
      for (const auto& q : qs.queries) {
        const auto b = compir_answer(ctx, p, q);
        data_bytes += b.data.size() * b.data[0].size() * kScalarBytes;
      }
      const std::size_t item_bytes = p.width() * m * kScalarBytes;
      EXPECT_EQ(item_bytes * k, data_bytes * (k - t));
    }
  }
}

TEST(Golden, TranscriptsReplay) {
  const std::string dir = COMPIR_GOLDEN_DIR;
  for (const auto& c : testing::golden_cases()) {
    const auto fresh = testing::run_golden_case(c);
    const std::string path = testing::golden_path(dir, c);
    if (testing::regen_requested()) testing::write_golden(path, fresh);
    const auto stored = testing::read_golden(path);
    EXPECT_EQ(fresh.request, stored.request) << c.name;
    EXPECT_EQ(fresh.reply, stored.reply) << c.name;
    // Replaying the stored request against the same deployment gives the
    // stored reply.
    Rng rng(c.seed);
    const auto pp = compir_setup(c.params, rng);
    const auto db = Database::random(c.m, c.params.columns(), rng);
    const ServerContext ctx(pp, db);
    const Frame f = decode_frame(stored.request);
    EXPECT_EQ(handle_request(ctx, f.type, f.payload), stored.reply) << c.name;
  }
}

}  // namespace
}  // namespace compir
