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

#ifndef COMPIR_TESTS_GOLDEN_CASES_HPP_
#define COMPIR_TESTS_GOLDEN_CASES_HPP_

// Deterministic request/reply transcripts. The files under tests/golden
// hold one transcript each as two hex lines, request then reply, both
// complete frames. Set COMPIR_REGEN_GOLDEN=1 to rewrite them.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "compir/wire.hpp"

namespace compir::testing {

struct GoldenCase {
  std::string name;
  SchemeParams params;
  std::size_t m = 1;
  std::size_t index = 1;
  std::size_t server = 0;
  std::uint64_t seed = 1;
  // Query sent with n replaced by this value when nonzero; makes the
  // server answer ERROR.
  std::size_t wire_n_override = 0;
};

struct Transcript {
  Bytes request;
  Bytes reply;
};

inline std::vector<GoldenCase> golden_cases() {
  return {
      {"ckgs2_n5_m2", SchemeParams::make(SchemeId::kCkgs2, 2, 1, 5), 2, 1, 1, 11, 0},
      {"ckgsk_k3_n4_m1", SchemeParams::make(SchemeId::kCkgsK, 3, 2, 4), 1, 3, 2, 12, 0},
      {"wy_k2_n4_m1", SchemeParams::make(SchemeId::kWy, 2, 1, 4), 1, 2, 0, 13, 0},
      {"be_k3_t1_n3_m2", SchemeParams::make(SchemeId::kBe, 3, 1, 3), 2, 3, 1, 14, 0},
      {"error_dimension", SchemeParams::make(SchemeId::kCkgs2, 2, 1, 8), 1, 1, 0, 15, 16},
  };
}

// Setup, database and query all come from the case seed.
inline Transcript run_golden_case(const GoldenCase& c) {
  Rng rng(c.seed);
  const auto pp = compir_setup(c.params, rng);
  const auto db = Database::random(c.m, c.params.columns(), rng);
  const ServerContext ctx(pp, db);
  const auto qs = queries_gen(c.params, c.index, rng);
  Transcript t;
  if (c.wire_n_override != 0) {
    const auto wide = SchemeParams::make(c.params.scheme, c.params.k, c.params.t,
                                         c.wire_n_override);
    Query q = qs.queries[c.server];
    q.entries.resize(wide.query_length());
    t.request = encode_query(wide, c.server, c.m, q);
  } else {
    t.request = encode_query(c.params, c.server, c.m, qs.queries[c.server]);
  }
  const Frame f = decode_frame(t.request);
  t.reply = handle_request(ctx, f.type, f.payload);
  return t;
}

inline std::string to_hex(std::span<const std::uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(2 * b.size());
  for (auto x : b) {
    s.push_back(digits[x >> 4]);
    s.push_back(digits[x & 15]);
  }
  return s;
}

inline Bytes from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::stoul(s.substr(2 * i, 2), nullptr, 16));
  }
  return out;
}

inline std::string golden_path(const std::string& dir, const GoldenCase& c) {
  return dir + "/" + c.name + ".hex";
}

inline Transcript read_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing golden file " + path);
  std::string req, rep;
  std::getline(in, req);
  std::getline(in, rep);
  return Transcript{from_hex(req), from_hex(rep)};
}

inline void write_golden(const std::string& path, const Transcript& t) {
  std::ofstream out(path);
  out << to_hex(t.request) << "\n" << to_hex(t.reply) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

inline bool regen_requested() {
  const char* v = std::getenv("COMPIR_REGEN_GOLDEN");
  return v != nullptr && std::string(v) == "1";
}

}  // namespace compir::testing

#endif  // COMPIR_TESTS_GOLDEN_CASES_HPP_
