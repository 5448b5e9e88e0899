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

#include "compir/lmc.hpp"

#include <openssl/crypto.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "compir/serial.hpp"

namespace compir {

namespace {

constexpr std::uint8_t kPpVersion = 1;
constexpr std::uint32_t kMaxPpDimension = 1u << 24;

void require_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": length mismatch");
  }
}

}  // namespace

PublicParams PublicParams::setup(std::size_t n, Rng& entropy) {
  Scalar secret;
  do {
    secret = entropy.next_scalar();
  } while (secret.is_zero());
  return setup_with_secret(n, secret);
}

PublicParams PublicParams::setup_with_secret(std::size_t n, Scalar secret) {
  if (n == 0) throw std::invalid_argument("lmc setup: n must be positive");
  if (n > kMaxPpDimension) throw std::invalid_argument("lmc setup: n too large");

  std::vector<Scalar> powers(2 * n);
  powers[0] = secret;
  for (std::size_t j = 1; j < 2 * n; ++j) powers[j] = powers[j - 1] * secret;

  PublicParams pp;
  pp.n_ = n;
  std::vector<G1> g1(n);
  const G1 g1_gen = G1::generator();
  for (std::size_t j = 0; j < n; ++j) g1[j] = g1_gen * powers[j];
  std::vector<G2> g2;
  g2.reserve(2 * n - 1);
  const G2 g2_gen = G2::generator();
  for (std::size_t j = 1; j <= 2 * n; ++j) {
    if (j == n + 1) continue;
    g2.push_back(g2_gen * powers[j - 1]);
  }
  pp.g1_ = batch_to_affine(g1);
  pp.g2_ = batch_to_affine(g2);

  OPENSSL_cleanse(powers.data(), powers.size() * sizeof(Scalar));
  OPENSSL_cleanse(&secret, sizeof(secret));
  return pp;
}

const blst_p1_affine& PublicParams::g1_power(std::size_t j) const {
  if (j == 0 || j > n_) throw std::out_of_range("g1_power index");
  return g1_[j - 1];
}

std::size_t PublicParams::g2_slot(std::size_t j) const {
  if (j == 0 || j > 2 * n_) throw std::out_of_range("g2_power index");
  if (j == n_ + 1) {
    throw std::out_of_range("g2_power: index n+1 is not part of the parameters");
  }
  return j <= n_ ? j - 1 : j - 2;
}

const blst_p2_affine& PublicParams::g2_power(std::size_t j) const {
  return g2_[g2_slot(j)];
}

bool PublicParams::spot_check(Rng& rng, int rounds) const {
  const auto present = [this](std::size_t b) {
    return b >= 1 && b <= 2 * n_ && b != n_ + 1;
  };
  for (int r = 0; r < rounds; ++r) {
    const std::size_t a = 1 + rng.uniform(n_);
    const std::size_t a2 = 1 + rng.uniform(n_);
    const std::size_t b = 1 + rng.uniform(2 * n_);
    // b2 = a + b - a2 must be a present G2 index.
    const std::size_t sum = a + b;
    if (sum <= a2) continue;
    const std::size_t b2 = sum - a2;
    if (!present(b) || !present(b2)) continue;
    const G1 lhs_p(g1_power(a));
    const G2 lhs_q(g2_power(b));
    const G1 rhs_p(g1_power(a2));
    const G2 rhs_q(g2_power(b2));
    const G1 ps[2] = {lhs_p, -rhs_p};
    const G2 qs[2] = {lhs_q, rhs_q};
    if (!pairing_product_is_identity(ps, qs)) return false;
  }
  return true;
}

Bytes PublicParams::serialize() const {
  ByteWriter w;
  w.raw(std::string_view("CPPP"));
  w.u8(kPpVersion);
  w.u32(static_cast<std::uint32_t>(n_));
  std::array<std::uint8_t, kG1Bytes> b1;
  for (const auto& p : g1_) {
    blst_p1_affine_compress(b1.data(), &p);
    w.raw(b1);
  }
  std::array<std::uint8_t, kG2Bytes> b2;
  for (const auto& p : g2_) {
    blst_p2_affine_compress(b2.data(), &p);
    w.raw(b2);
  }
  return w.take();
}

PublicParams PublicParams::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.str(4) != "CPPP") throw DecodeError("pp: bad magic");
  if (r.u8() != kPpVersion) throw DecodeError("pp: unsupported version");
  const std::uint32_t n = r.u32();
  if (n == 0 || n > kMaxPpDimension) throw DecodeError("pp: bad dimension");
  const std::size_t want =
      static_cast<std::size_t>(n) * kG1Bytes + (2 * std::size_t{n} - 1) * kG2Bytes;
  if (r.remaining() != want) throw DecodeError("pp: truncated or oversized body");
  PublicParams pp;
  pp.n_ = n;
  pp.g1_.reserve(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    pp.g1_.push_back(G1::decompress(r.bytes(kG1Bytes)).to_affine());
  }
  pp.g2_.reserve(2 * std::size_t{n} - 1);
  for (std::size_t j = 0; j + 1 < 2 * std::size_t{n}; ++j) {
    pp.g2_.push_back(G2::decompress(r.bytes(kG2Bytes)).to_affine());
  }
  return pp;
}

void PublicParams::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

PublicParams PublicParams::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

bool PublicParams::operator==(const PublicParams& o) const {
  if (n_ != o.n_) return false;
  for (std::size_t i = 0; i < g1_.size(); ++i) {
    if (!blst_p1_affine_is_equal(&g1_[i], &o.g1_[i])) return false;
  }
  for (std::size_t i = 0; i < g2_.size(); ++i) {
    if (!blst_p2_affine_is_equal(&g2_[i], &o.g2_[i])) return false;
  }
  return true;
}

Commitment lmc_commit(const PublicParams& pp, std::span<const Scalar> v) {
  require_len(v.size(), pp.n(), "lmc_commit");
  return Commitment{msm(pp.g1_powers(), v)};
}

std::vector<Scalar> polynomial_product(std::span<const Scalar> c,
                                       std::span<const Scalar> v) {
  require_len(c.size(), v.size(), "polynomial_product");
  const std::size_t n = c.size();
  std::vector<Scalar> out(2 * n);
  // c_j (1-based) sits at z^{n+1-j}, v_{j'} at z^{j'}; product lands on
  // z^{n+1-j+j'}, stored at offset n-j+j'.
  for (std::size_t j = 1; j <= n; ++j) {
    const Scalar& cj = c[j - 1];
    Scalar* row = out.data() + (n - j);
    for (std::size_t jp = 1; jp <= n; ++jp) row[jp] += cj * v[jp - 1];
  }
  return out;
}

std::vector<Scalar> lmc_prod_coeffs(std::span<const Scalar> c,
                                    std::span<const Scalar> v) {
  auto out = polynomial_product(c, v);
  if (!out.empty()) out[c.size()] = Scalar::zero();
  return out;
}

Witness lmc_witness(const PublicParams& pp, std::span<const Scalar> v,
                    std::span<const Scalar> c) {
  const std::size_t n = pp.n();
  require_len(v.size(), n, "lmc_witness");
  require_len(c.size(), n, "lmc_witness");
  const auto coeffs = lmc_prod_coeffs(c, v);
  // z^1 never occurs and z^{n+1} is the opened value; the MSM runs over
  // exponents 2..2n except n+1, i.e. storage slots 1..2n-2.
  std::vector<Scalar> exps(pp.g2_stored().size());
  for (std::size_t e = 2; e <= 2 * n; ++e) {
    if (e == n + 1) continue;
    exps[pp.g2_slot(e)] = coeffs[e - 1];
  }
  if (exps.size() <= 1) return Witness{G2::identity()};
  return Witness{msm(pp.g2_stored().subspan(1), std::span<const Scalar>(exps).subspan(1))};
}

bool lmc_verify(const PublicParams& pp, const Commitment& com,
                std::span<const Scalar> c, const Scalar& y, const Witness& w) {
  const std::size_t n = pp.n();
  if (c.size() != n) return false;
  // prod_j (G2^{a^{n+1-j}})^{c_j}: slot n-j holds index n+1-j.
  std::vector<Scalar> rev(c.rbegin(), c.rend());
  const G2 folded = msm(pp.g2_stored().first(n), rev);
  const G1 lifted = G1(pp.g1_power(1)) * y;
  const G1 ps[3] = {com.point, -lifted, -G1::generator()};
  const G2 qs[3] = {folded, G2(pp.g2_power(n)), w.point};
  return pairing_product_is_identity(ps, qs);
}

bool lmc_verify(const PublicParams& pp, const Commitment& com,
                std::span<const Scalar> c, std::span<const std::uint8_t> y,
                const Witness& w) {
  const auto value = Scalar::from_canonical(y);
  if (!value) return false;
  return lmc_verify(pp, com, c, *value, w);
}

std::vector<Scalar> lmc_batch_challenge(
    const Commitment& com, std::span<const std::vector<Scalar>> combos,
    std::span<const Scalar> ys) {
  if (combos.empty()) throw std::invalid_argument("batch challenge: no combinations");
  require_len(ys.size(), combos.size(), "batch challenge");
  const std::size_t n = combos.front().size();
  Sha3Hasher h;
  static constexpr std::string_view kDomain = "compir-lmc-batch-v1";
  h.update(std::span(reinterpret_cast<const std::uint8_t*>(kDomain.data()),
                     kDomain.size()));
  h.update(com.encode());
  std::uint8_t hdr[8];
  store_u32(hdr, static_cast<std::uint32_t>(combos.size()));
  store_u32(hdr + 4, static_cast<std::uint32_t>(n));
  h.update(hdr);
  for (const auto& combo : combos) {
    require_len(combo.size(), n, "batch challenge");
    for (const auto& s : combo) h.update(s.to_bytes());
  }
  for (const auto& y : ys) h.update(y.to_bytes());
  const auto seed = h.finish();

  std::vector<Scalar> r(combos.size());
  std::array<std::uint8_t, 36> block;
  std::memcpy(block.data(), seed.data(), seed.size());
  for (std::size_t u = 0; u < r.size(); ++u) {
    store_u32(block.data() + 32, static_cast<std::uint32_t>(u));
    r[u] = Scalar::from_wide_bytes(sha3_256(block));
  }
  return r;
}

AggregatedOpening lmc_aggregate(std::span<const std::vector<Scalar>> combos,
                                std::span<const Scalar> ys,
                                std::span<const Scalar> weights) {
  if (combos.empty()) throw std::invalid_argument("aggregate: no combinations");
  require_len(ys.size(), combos.size(), "aggregate");
  require_len(weights.size(), combos.size(), "aggregate");
  const std::size_t n = combos.front().size();
  AggregatedOpening out{std::vector<Scalar>(n), Scalar::zero()};
  for (std::size_t u = 0; u < combos.size(); ++u) {
    require_len(combos[u].size(), n, "aggregate");
    for (std::size_t j = 0; j < n; ++j) {
      if (!combos[u][j].is_zero()) out.c[j] += weights[u] * combos[u][j];
    }
    out.y += weights[u] * ys[u];
  }
  return out;
}

}  // namespace compir
