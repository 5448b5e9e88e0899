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

#ifndef COMPIR_TESTS_TEST_UTIL_HPP_
#define COMPIR_TESTS_TEST_UTIL_HPP_

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "compir/groupcore.hpp"

namespace compir::testing {

// Big-endian hex (optional 0x, any length up to 64 digits) to bytes.
inline std::array<std::uint8_t, 32> hex32(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  if (hex.size() > 64) throw std::invalid_argument("hex too long");
  std::array<std::uint8_t, 32> out{};
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  // Right-align.
  std::size_t pos = 64 - hex.size();
  for (char c : hex) {
    const int v = nibble(c);
    auto& b = out[pos / 2];
    b = static_cast<std::uint8_t>(pos % 2 == 0 ? (v << 4) | (b & 0x0F) : (b & 0xF0) | v);
    ++pos;
  }
  return out;
}

inline Scalar scalar_hex(std::string_view hex) {
  const auto b = hex32(hex);
  return Scalar::decode(b);
}

inline std::vector<Scalar> random_vec(std::size_t n, Rng& rng) {
  std::vector<Scalar> v(n);
  for (auto& s : v) s = rng.next_scalar();
  return v;
}

inline Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  Scalar acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace compir::testing

#endif  // COMPIR_TESTS_TEST_UTIL_HPP_
