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

#ifndef COMPIR_LMC_HPP_
#define COMPIR_LMC_HPP_

// Pairing-based linear map commitment (Lai-Malavolta).
//
// A vector v in Z_p^n is committed as C = prod_j (G1^{a^j})^{v_j}. For a
// coefficient vector c the prover opens y = c.v with a single G2 element
//
//   w = prod_{j != j'} (G2^{a^{n+1-j+j'}})^{c_j v_{j'}},
//
// and the verifier checks
//
//   e(C, prod_j (G2^{a^{n+1-j}})^{c_j}) == e((G1^a)^y, G2^{a^n}) * e(G1, w).
//
// The public parameters never contain G2^{a^{n+1}}: that element is the
// one that would let a prover open arbitrary values.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "compir/groupcore.hpp"

namespace compir {

class PublicParams {
 public:
  // Samples the secret from `entropy`, computes its powers and wipes the
  // secret before returning. Single-party setup: whoever runs this holds
  // the toxic waste for the duration of the call.
  static PublicParams setup(std::size_t n, Rng& entropy);
  // Test mode with a caller-chosen secret. The secret is wiped on return.
  static PublicParams setup_with_secret(std::size_t n, Scalar secret);

  std::size_t n() const { return n_; }

  // G1^{a^j}, j in [1, n].
  const blst_p1_affine& g1_power(std::size_t j) const;
  // G2^{a^j}, j in [1, 2n] \ {n+1}. Throws std::out_of_range for n+1.
  const blst_p2_affine& g2_power(std::size_t j) const;
  // Storage slot of index j in g2_stored(); throws for the hole.
  std::size_t g2_slot(std::size_t j) const;

  std::span<const blst_p1_affine> g1_powers() const { return g1_; }
  // 2n-1 elements, ascending index order with n+1 skipped.
  std::span<const blst_p2_affine> g2_stored() const { return g2_; }

  // Pairing cross-check e(g1[a], g2[b]) == e(g1[a'], g2[b']) for random
  // index pairs with a+b == a'+b'.
  bool spot_check(Rng& rng, int rounds) const;

  // "CPPP" | version u8 | n u32 BE | n x 48B | (2n-1) x 96B.
  Bytes serialize() const;
  static PublicParams deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static PublicParams load(const std::filesystem::path& path);

  bool operator==(const PublicParams& o) const;

 private:
  PublicParams() = default;

  std::size_t n_ = 0;
  std::vector<blst_p1_affine> g1_;
  std::vector<blst_p2_affine> g2_;
};

struct Commitment {
  G1 point;

  std::array<std::uint8_t, kG1Bytes> encode() const { return point.compress(); }
  static Commitment decode(std::span<const std::uint8_t> b) {
    return Commitment{G1::decompress(b)};
  }
  bool operator==(const Commitment&) const = default;
};

struct Witness {
  G2 point;

  std::array<std::uint8_t, kG2Bytes> encode() const { return point.compress(); }
  static Witness decode(std::span<const std::uint8_t> b) {
    return Witness{G2::decompress(b)};
  }
  bool operator==(const Witness&) const = default;
};

Commitment lmc_commit(const PublicParams& pp, std::span<const Scalar> v);

// Coefficients of f_c(z) * f_v(z), f_c = sum c_j z^{n+1-j}, f_v = sum v_j z^j.
// Entry e-1 holds the coefficient of z^e for e in [1, 2n]. The z^{n+1}
// coefficient equals c.v.
std::vector<Scalar> polynomial_product(std::span<const Scalar> c,
                                       std::span<const Scalar> v);

// polynomial_product with the z^{n+1} entry forced to zero: the exponents
// of the witness MSM.
std::vector<Scalar> lmc_prod_coeffs(std::span<const Scalar> c,
                                    std::span<const Scalar> v);

Witness lmc_witness(const PublicParams& pp, std::span<const Scalar> v,
                    std::span<const Scalar> c);

bool lmc_verify(const PublicParams& pp, const Commitment& com,
                std::span<const Scalar> c, const Scalar& y, const Witness& w);
// Variant taking the claimed value as raw bytes; a non-canonical encoding
// (value >= p) fails the range check.
bool lmc_verify(const PublicParams& pp, const Commitment& com,
                std::span<const Scalar> c, std::span<const std::uint8_t> y,
                const Witness& w);

// Fiat-Shamir weights for aggregating L openings into one. Throws
// std::invalid_argument on empty or ragged input.
std::vector<Scalar> lmc_batch_challenge(
    const Commitment& com, std::span<const std::vector<Scalar>> combos,
    std::span<const Scalar> ys);

struct AggregatedOpening {
  std::vector<Scalar> c;
  Scalar y;
};

AggregatedOpening lmc_aggregate(std::span<const std::vector<Scalar>> combos,
                                std::span<const Scalar> ys,
                                std::span<const Scalar> weights);

}  // namespace compir

#endif  // COMPIR_LMC_HPP_
