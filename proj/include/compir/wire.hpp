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

#ifndef COMPIR_WIRE_HPP_
#define COMPIR_WIRE_HPP_

// Frame layout, all integers big-endian:
//
//   length u32 | type u8 | payload          length = 1 + |payload|
//
//   QUERY  (0x01)  scheme u8 | k u8 | t u8 | server u8 | n u32 | m u32 | body
//                  body: ckgs2 ceil(n/8) bytes, bits MSB-first;
//                        otherwise one 32-byte scalar per query entry
//   ANSWER (0x02)  L u32 | L*m scalars (combination-major) | L scalars |
//                  mode u8 | witnesses, 96 bytes each
//   ERROR  (0x7F)  code u8 | UTF-8 message

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "compir/compir.hpp"

namespace compir {

enum class FrameType : std::uint8_t { kQuery = 0x01, kAnswer = 0x02, kError = 0x7F };
enum class ErrorCode : std::uint8_t { kMalformed = 1, kDimension = 2, kOversize = 3 };

constexpr std::size_t kFrameHeaderBytes = 5;
constexpr std::size_t kDefaultMaxFrame = std::size_t{64} << 20;

// Carries the error code to put in an ERROR frame.
class WireError : public std::runtime_error {
 public:
  WireError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Throws WireError(kOversize) when the frame would exceed max_frame.
Bytes encode_frame(std::uint8_t type, std::span<const std::uint8_t> payload,
                   std::size_t max_frame = kDefaultMaxFrame);

struct FrameHeader {
  std::uint32_t length;  // type + payload
  std::uint8_t type;
};
FrameHeader decode_frame_header(std::span<const std::uint8_t, kFrameHeaderBytes> b);

struct Frame {
  std::uint8_t type = 0;
  Bytes payload;
};
// Parses exactly one complete frame.
Frame decode_frame(std::span<const std::uint8_t> bytes,
                   std::size_t max_frame = kDefaultMaxFrame);

struct QueryMessage {
  SchemeParams params;
  std::size_t server_index = 0;  // 0-based
  std::size_t m = 0;
  Query query;
};

std::size_t query_body_bytes(const SchemeParams& params);
Bytes encode_query_payload(const SchemeParams& params, std::size_t server_index,
                           std::size_t m, const Query& q);
Bytes encode_query(const SchemeParams& params, std::size_t server_index, std::size_t m,
                   const Query& q);
// Throws WireError(kMalformed) on any layout violation.
QueryMessage decode_query_payload(std::span<const std::uint8_t> payload);

Bytes encode_answer_payload(const AnswerBundle& b);
Bytes encode_answer(const AnswerBundle& b);
// m comes from the deployment; the payload does not repeat it. Throws
// WireError(kMalformed) on bad layout, non-canonical scalars or points
// outside the subgroup.
AnswerBundle decode_answer_payload(std::span<const std::uint8_t> payload, std::size_t m);

struct ErrorMessage {
  ErrorCode code;
  std::string message;
};
Bytes encode_error(ErrorCode code, std::string_view message);
ErrorMessage decode_error_payload(std::span<const std::uint8_t> payload);

// Server request handler shared by the network daemon and in-process
// callers: maps one request frame to its complete reply frame.
Bytes handle_request(const ServerContext& ctx, std::uint8_t type,
                     std::span<const std::uint8_t> payload,
                     std::size_t max_frame = kDefaultMaxFrame);

}  // namespace compir

#endif  // COMPIR_WIRE_HPP_
