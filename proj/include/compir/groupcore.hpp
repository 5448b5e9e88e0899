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

#ifndef COMPIR_GROUPCORE_HPP_
#define COMPIR_GROUPCORE_HPP_

// Scalar field and bilinear groups of BLS12-381, backed by blst.
//
// Everything above this header only sees Scalar, G1, G2, GT and the free
// functions below; no other module includes blst directly.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "blst.h"

namespace compir {

using Bytes = std::vector<std::uint8_t>;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kG1Bytes = 48;
inline constexpr std::size_t kG2Bytes = 96;

// Operation counters. Thread-local so that instrumented runs stay exact
// without synchronisation; see CounterScope for per-phase deltas.
struct OpCounters {
  std::uint64_t field_add = 0;
  std::uint64_t field_mul = 0;
  std::uint64_t field_inv = 0;
  std::uint64_t g1_add = 0;
  std::uint64_t g1_mul = 0;
  std::uint64_t g2_add = 0;
  std::uint64_t g2_mul = 0;
  std::uint64_t pairings = 0;

  OpCounters& operator+=(const OpCounters& o);
  friend OpCounters operator-(OpCounters a, const OpCounters& b);
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

OpCounters& op_counters();

class CounterScope {
 public:
  CounterScope() : start_(op_counters()) {}
  OpCounters delta() const { return op_counters() - start_; }

 private:
  OpCounters start_;
};

// Element of Z_p, p the 255-bit order of the BLS12-381 groups.
class Scalar {
 public:
  Scalar() : v_{} {}

  static Scalar zero() { return Scalar(); }
  static Scalar one();
  static Scalar from_u64(std::uint64_t v);
  static Scalar from_i64(std::int64_t v);

  // integer(b) mod p; any 32 bytes accepted.
  static Scalar from_wide_bytes(std::span<const std::uint8_t, 32> b);
  // Big-endian bytes of arbitrary length, reduced mod p.
  static Scalar reduce_be(std::span<const std::uint8_t> b);
  // Strict decode: exactly 32 bytes holding a value < p.
  static std::optional<Scalar> from_canonical(std::span<const std::uint8_t> b);
  static Scalar decode(std::span<const std::uint8_t> b);

  std::array<std::uint8_t, kScalarBytes> to_bytes() const;
  void write_to(std::uint8_t* out) const;
  // Little-endian canonical form, the layout blst's MSM expects.
  blst_scalar to_blst_scalar() const;
  std::string to_hex() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);

  // Throws std::domain_error on zero.
  Scalar inverse() const;
  Scalar pow(std::uint64_t e) const;

  bool is_zero() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  const blst_fr& raw() const { return v_; }

 private:
  blst_fr v_;  // Montgomery form
};

// The modulus p as 32 big-endian bytes.
const std::array<std::uint8_t, 32>& scalar_modulus_bytes();

Scalar inner_product(std::span<const Scalar> a, std::span<const Scalar> b);

class G1 {
 public:
  G1();  // identity
  explicit G1(const blst_p1& p) : p_(p) {}
  explicit G1(const blst_p1_affine& a);

  static G1 generator();
  static G1 identity() { return G1(); }

  G1 operator+(const G1& o) const;
  G1 operator-() const;
  G1 operator*(const Scalar& s) const;
  G1& operator+=(const G1& o);

  bool is_identity() const;
  bool operator==(const G1& o) const;
  bool operator!=(const G1& o) const { return !(*this == o); }

  std::array<std::uint8_t, kG1Bytes> compress() const;
  // Rejects malformed encodings, points off the curve, and points outside
  // the prime-order subgroup.
  static G1 decompress(std::span<const std::uint8_t> b);

  blst_p1_affine to_affine() const;
  const blst_p1& raw() const { return p_; }

 private:
  blst_p1 p_;
};

class G2 {
 public:
  G2();
  explicit G2(const blst_p2& p) : p_(p) {}
  explicit G2(const blst_p2_affine& a);

  static G2 generator();
  static G2 identity() { return G2(); }

  G2 operator+(const G2& o) const;
  G2 operator-() const;
  G2 operator*(const Scalar& s) const;
  G2& operator+=(const G2& o);

  bool is_identity() const;
  bool operator==(const G2& o) const;
  bool operator!=(const G2& o) const { return !(*this == o); }

  std::array<std::uint8_t, kG2Bytes> compress() const;
  static G2 decompress(std::span<const std::uint8_t> b);

  blst_p2_affine to_affine() const;
  const blst_p2& raw() const { return p_; }

 private:
  blst_p2 p_;
};

class GT {
 public:
  GT();  // identity
  explicit GT(const blst_fp12& f) : f_(f) {}

  static GT identity() { return GT(); }

  GT operator*(const GT& o) const;
  GT pow(const Scalar& e) const;

  bool is_identity() const;
  bool operator==(const GT& o) const;
  bool operator!=(const GT& o) const { return !(*this == o); }

 private:
  blst_fp12 f_;
};

GT pair(const G1& a, const G2& b);

// True iff prod_i e(as[i], bs[i]) == 1. One Miller loop per term and a
// single final exponentiation.
bool pairing_product_is_identity(std::span<const G1> as,
                                 std::span<const G2> bs);

std::vector<blst_p1_affine> batch_to_affine(std::span<const G1> points);
std::vector<blst_p2_affine> batch_to_affine(std::span<const G2> points);

// prod points[i]^scalars[i]; identity on empty input. Throws
// std::invalid_argument on length mismatch.
G1 msm(std::span<const blst_p1_affine> points, std::span<const Scalar> scalars);
G2 msm(std::span<const blst_p2_affine> points, std::span<const Scalar> scalars);
G1 msm(std::span<const G1> points, std::span<const Scalar> scalars);
G2 msm(std::span<const G2> points, std::span<const Scalar> scalars);

// SHA3-256.
std::array<std::uint8_t, 32> sha3_256(std::span<const std::uint8_t> data);

// Incremental SHA3-256 for multi-part transcripts.
class Sha3Hasher {
 public:
  Sha3Hasher();
  ~Sha3Hasher();
  Sha3Hasher(const Sha3Hasher&) = delete;
  Sha3Hasher& operator=(const Sha3Hasher&) = delete;

  void update(std::span<const std::uint8_t> data);
  std::array<std::uint8_t, 32> finish();

 private:
  void* ctx_;
};

// Deterministic byte stream: SHAKE256(seed || block counter), expanded in
// 4 KiB blocks. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  explicit Rng(std::span<const std::uint8_t, 32> seed);
  // Seeded from the OS entropy source.
  static Rng from_entropy();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  bool next_bit();
  // Uniform in [0, bound); bound > 0.
  std::uint64_t uniform(std::uint64_t bound);
  // Uniform scalar: 48 random bytes reduced mod p.
  Scalar next_scalar();
  // Fresh independent stream derived from this one.
  Rng fork();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  void refill();

  std::array<std::uint8_t, 32> seed_{};
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = 4096;
};

}  // namespace compir

#endif  // COMPIR_GROUPCORE_HPP_
