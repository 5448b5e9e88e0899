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

#include "compir/wire.hpp"

#include <limits>

#include "compir/serial.hpp"

namespace compir {

namespace {

constexpr std::size_t kQueryHeaderBytes = 12;

[[noreturn]] void malformed(const std::string& what) {
  throw WireError(ErrorCode::kMalformed, what);
}

}  // namespace

Bytes encode_frame(std::uint8_t type, std::span<const std::uint8_t> payload,
                   std::size_t max_frame) {
  const std::size_t length = payload.size() + 1;
  if (length > max_frame || length > std::numeric_limits<std::uint32_t>::max()) {
    throw WireError(ErrorCode::kOversize,
                    "frame of " + std::to_string(length) + " bytes exceeds limit");
  }
  Bytes out(kFrameHeaderBytes + payload.size());
  store_u32(out.data(), static_cast<std::uint32_t>(length));
  out[4] = type;
  std::copy(payload.begin(), payload.end(), out.begin() + kFrameHeaderBytes);
  return out;
}

FrameHeader decode_frame_header(std::span<const std::uint8_t, kFrameHeaderBytes> b) {
  return FrameHeader{load_u32(b.data()), b[4]};
}

Frame decode_frame(std::span<const std::uint8_t> bytes, std::size_t max_frame) {
  if (bytes.size() < kFrameHeaderBytes) malformed("short frame header");
  const auto h = decode_frame_header(bytes.first<kFrameHeaderBytes>());
  if (h.length == 0) malformed("zero frame length");
  if (h.length > max_frame) throw WireError(ErrorCode::kOversize, "frame exceeds limit");
  if (bytes.size() != 4 + std::size_t{h.length}) malformed("frame length mismatch");
  Frame f;
  f.type = h.type;
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

// ---------------------------------------------------------------- queries

std::size_t query_body_bytes(const SchemeParams& params) {
  if (params.scheme == SchemeId::kCkgs2) return (params.n + 7) / 8;
  return params.query_length() * kScalarBytes;
}

Bytes encode_query_payload(const SchemeParams& params, std::size_t server_index,
                           std::size_t m, const Query& q) {
  if (q.entries.size() != params.query_length()) {
    throw std::invalid_argument("query length does not match scheme parameters");
  }
  if (server_index >= params.k) throw std::invalid_argument("server index out of range");
  ByteWriter w;
  w.reserve(kQueryHeaderBytes + query_body_bytes(params));
  w.u8(static_cast<std::uint8_t>(params.scheme));
  w.u8(static_cast<std::uint8_t>(params.k));
  w.u8(static_cast<std::uint8_t>(params.t));
  w.u8(static_cast<std::uint8_t>(server_index));
  w.u32(static_cast<std::uint32_t>(params.n));
  w.u32(static_cast<std::uint32_t>(m));
  if (params.scheme == SchemeId::kCkgs2) {
    Bytes packed((params.n + 7) / 8, 0);
    for (std::size_t j = 0; j < params.n; ++j) {
      const Scalar& e = q.entries[j];
      if (e == Scalar::one()) {
        packed[j / 8] |= static_cast<std::uint8_t>(0x80u >> (j % 8));
      } else if (!e.is_zero()) {
        throw std::invalid_argument("ckgs2 query entries must be bits");
      }
    }
    w.raw(packed);
  } else {
    for (const auto& e : q.entries) w.scalar(e);
  }
  return w.take();
}

Bytes encode_query(const SchemeParams& params, std::size_t server_index, std::size_t m,
                   const Query& q) {
  return encode_frame(static_cast<std::uint8_t>(FrameType::kQuery),
                      encode_query_payload(params, server_index, m, q));
}

QueryMessage decode_query_payload(std::span<const std::uint8_t> payload) {
  try {
    ByteReader r(payload);
    const auto scheme = r.u8();
    const std::size_t k = r.u8();
    const std::size_t t = r.u8();
    const std::size_t server = r.u8();
    const std::size_t n = r.u32();
    const std::size_t m = r.u32();
    if (scheme < 1 || scheme > 4) malformed("unknown scheme id");
    QueryMessage msg;
    try {
      msg.params = SchemeParams::make(static_cast<SchemeId>(scheme), k, t, n);
    } catch (const std::invalid_argument& e) {
      malformed(std::string("bad parameters: ") + e.what());
    }
    if (server >= k) malformed("server index out of range");
    if (m == 0) malformed("m must be positive");
    msg.server_index = server;
    msg.m = m;
    if (r.remaining() != query_body_bytes(msg.params)) malformed("query body length mismatch");
    auto& e = msg.query.entries;
    e.resize(msg.params.query_length());
    if (msg.params.scheme == SchemeId::kCkgs2) {
      const auto packed = r.bytes(r.remaining());
      for (std::size_t j = 0; j < n; ++j) {
        const bool bit = (packed[j / 8] >> (7 - j % 8)) & 1;
        e[j] = bit ? Scalar::one() : Scalar::zero();
      }
      if (n % 8 != 0 && (packed.back() & (0xFFu >> (n % 8))) != 0) {
        malformed("nonzero padding bits");
      }
    } else {
      for (auto& s : e) s = r.scalar();
    }
    return msg;
  } catch (const DecodeError& e) {
    malformed(std::string("query: ") + e.what());
  }
}

// ---------------------------------------------------------------- answers

Bytes encode_answer_payload(const AnswerBundle& b) {
  const std::size_t L = b.data.size();
  if (b.hashes.size() != L) throw std::invalid_argument("bundle hash count mismatch");
  const std::size_t m = L ? b.data[0].size() : 0;
  ByteWriter w;
  w.reserve(4 + (L * m + L) * kScalarBytes + 1 + b.witnesses.size() * kG2Bytes);
  w.u32(static_cast<std::uint32_t>(L));
  for (const auto& row : b.data) {
    if (row.size() != m) throw std::invalid_argument("bundle rows are ragged");
    for (const auto& s : row) w.scalar(s);
  }
  for (const auto& s : b.hashes) w.scalar(s);
  w.u8(static_cast<std::uint8_t>(b.mode));
  for (const auto& wit : b.witnesses) w.raw(wit.encode());
  return w.take();
}

Bytes encode_answer(const AnswerBundle& b) {
  return encode_frame(static_cast<std::uint8_t>(FrameType::kAnswer),
                      encode_answer_payload(b));
}

AnswerBundle decode_answer_payload(std::span<const std::uint8_t> payload, std::size_t m) {
  try {
    ByteReader r(payload);
    const std::size_t L = r.u32();
    if (L == 0) malformed("answer with no combinations");
    if (m == 0 || L > r.remaining() / kScalarBytes / (m + 1)) {
      malformed("answer shorter than its declared size");
    }
    AnswerBundle b;
    b.data.assign(L, std::vector<Scalar>(m));
    for (auto& row : b.data) {
      for (auto& s : row) s = r.scalar();
    }
    b.hashes.resize(L);
    for (auto& s : b.hashes) s = r.scalar();
    const auto mode = r.u8();
    if (mode > 1) malformed("unknown witness mode");
    b.mode = static_cast<WitnessMode>(mode);
    if (r.remaining() % kG2Bytes != 0) malformed("witness block is not a multiple of 96");
    b.witnesses.resize(r.remaining() / kG2Bytes);
    for (auto& wit : b.witnesses) wit = Witness::decode(r.bytes(kG2Bytes));
    return b;
  } catch (const DecodeError& e) {
    malformed(std::string("answer: ") + e.what());
  }
}

// ---------------------------------------------------------------- errors

Bytes encode_error(ErrorCode code, std::string_view message) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(code));
  w.raw(message);
  return encode_frame(static_cast<std::uint8_t>(FrameType::kError), w.take());
}

ErrorMessage decode_error_payload(std::span<const std::uint8_t> payload) {
  if (payload.empty()) malformed("empty error payload");
  return ErrorMessage{static_cast<ErrorCode>(payload[0]),
                      std::string(payload.begin() + 1, payload.end())};
}

// ---------------------------------------------------------------- server

Bytes handle_request(const ServerContext& ctx, std::uint8_t type,
                     std::span<const std::uint8_t> payload, std::size_t max_frame) {
  if (type != static_cast<std::uint8_t>(FrameType::kQuery)) {
    return encode_error(ErrorCode::kMalformed,
                        "unexpected frame type " + std::to_string(type));
  }
  try {
    const QueryMessage msg = decode_query_payload(payload);
    if (!ctx.accepts(msg.params)) {
      return encode_error(ErrorCode::kDimension,
                          "query parameters do not match this server's database");
    }
    if (msg.m != ctx.db().rows()) {
      return encode_error(ErrorCode::kDimension,
                          "query m=" + std::to_string(msg.m) + " but database has m=" +
                              std::to_string(ctx.db().rows()));
    }
    const AnswerBundle b = compir_answer(ctx, msg.params, msg.query);
    return encode_frame(static_cast<std::uint8_t>(FrameType::kAnswer),
                        encode_answer_payload(b), max_frame);
  } catch (const WireError& e) {
    return encode_error(e.code(), e.what());
  }
}

}  // namespace compir
