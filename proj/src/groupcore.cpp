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

#include "compir/groupcore.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstring>
#include <memory>

namespace compir {

namespace {

thread_local OpCounters tl_counters;

const blst_fr& fr_one() {
  static const blst_fr one = [] {
    blst_fr r;
    const std::uint64_t limbs[4] = {1, 0, 0, 0};
    blst_fr_from_uint64(&r, limbs);
    return r;
  }();
  return one;
}

std::vector<blst_scalar> to_blst_scalars(std::span<const Scalar> s) {
  std::vector<blst_scalar> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].to_blst_scalar();
  return out;
}

constexpr std::size_t kScalarBits = 255;

}  // namespace

OpCounters& OpCounters::operator+=(const OpCounters& o) {
  field_add += o.field_add;
  field_mul += o.field_mul;
  field_inv += o.field_inv;
  g1_add += o.g1_add;
  g1_mul += o.g1_mul;
  g2_add += o.g2_add;
  g2_mul += o.g2_mul;
  pairings += o.pairings;
  return *this;
}

OpCounters operator-(OpCounters a, const OpCounters& b) {
  a.field_add -= b.field_add;
  a.field_mul -= b.field_mul;
  a.field_inv -= b.field_inv;
  a.g1_add -= b.g1_add;
  a.g1_mul -= b.g1_mul;
  a.g2_add -= b.g2_add;
  a.g2_mul -= b.g2_mul;
  a.pairings -= b.pairings;
  return a;
}

OpCounters& op_counters() { return tl_counters; }

// ---------------------------------------------------------------- Scalar

Scalar Scalar::one() {
  Scalar s;
  s.v_ = fr_one();
  return s;
}

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  blst_fr_from_uint64(&s.v_, limbs);
  return s;
}

Scalar Scalar::from_i64(std::int64_t v) {
  if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
  return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
}

Scalar Scalar::from_wide_bytes(std::span<const std::uint8_t, 32> b) {
  return reduce_be(std::span<const std::uint8_t>(b.data(), b.size()));
}

Scalar Scalar::reduce_be(std::span<const std::uint8_t> b) {
  blst_scalar tmp;
  blst_scalar_from_be_bytes(&tmp, b.data(), b.size());
  Scalar s;
  blst_fr_from_scalar(&s.v_, &tmp);
  return s;
}

std::optional<Scalar> Scalar::from_canonical(std::span<const std::uint8_t> b) {
  if (b.size() != kScalarBytes) return std::nullopt;
  blst_scalar tmp;
  blst_scalar_from_bendian(&tmp, b.data());
  if (!blst_scalar_fr_check(&tmp)) return std::nullopt;
  Scalar s;
  blst_fr_from_scalar(&s.v_, &tmp);
  return s;
}

Scalar Scalar::decode(std::span<const std::uint8_t> b) {
  auto s = from_canonical(b);
  if (!s) throw DecodeError("non-canonical scalar encoding");
  return *s;
}

std::array<std::uint8_t, kScalarBytes> Scalar::to_bytes() const {
  std::array<std::uint8_t, kScalarBytes> out;
  write_to(out.data());
  return out;
}

void Scalar::write_to(std::uint8_t* out) const {
  blst_scalar tmp;
  blst_scalar_from_fr(&tmp, &v_);
  blst_bendian_from_scalar(out, &tmp);
}

blst_scalar Scalar::to_blst_scalar() const {
  blst_scalar tmp;
  blst_scalar_from_fr(&tmp, &v_);
  return tmp;
}

std::string Scalar::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  auto b = to_bytes();
  std::string s;
  s.reserve(64);
  for (auto byte : b) {
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 15]);
  }
  return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r;
  blst_fr_add(&r.v_, &v_, &o.v_);
  ++tl_counters.field_add;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r;
  blst_fr_sub(&r.v_, &v_, &o.v_);
  ++tl_counters.field_add;
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r;
  blst_fr_mul(&r.v_, &v_, &o.v_);
  ++tl_counters.field_mul;
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  blst_fr_cneg(&r.v_, &v_, true);
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  blst_fr_add(&v_, &v_, &o.v_);
  ++tl_counters.field_add;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  blst_fr_sub(&v_, &v_, &o.v_);
  ++tl_counters.field_add;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  blst_fr_mul(&v_, &v_, &o.v_);
  ++tl_counters.field_mul;
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero scalar");
  Scalar r;
  blst_fr_eucl_inverse(&r.v_, &v_);
  ++tl_counters.field_inv;
  return r;
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar result = one();
  Scalar base = *this;
  while (e != 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

bool Scalar::is_zero() const {
  static const blst_fr zero{};
  return std::memcmp(&v_, &zero, sizeof(v_)) == 0;
}

bool Scalar::operator==(const Scalar& o) const {
  return std::memcmp(&v_, &o.v_, sizeof(v_)) == 0;
}

const std::array<std::uint8_t, 32>& scalar_modulus_bytes() {
  static const std::array<std::uint8_t, 32> p = {
      0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8,
      0x08, 0x09, 0xa1, 0xd8, 0x05, 0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe,
      0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};
  return p;
}

Scalar inner_product(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("inner_product: length mismatch");
  }
  Scalar acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// ---------------------------------------------------------------- G1

G1::G1() : p_{} {}

G1::G1(const blst_p1_affine& a) { blst_p1_from_affine(&p_, &a); }

G1 G1::generator() { return G1(*blst_p1_generator()); }

G1 G1::operator+(const G1& o) const {
  blst_p1 r;
  blst_p1_add_or_double(&r, &p_, &o.p_);
  ++tl_counters.g1_add;
  return G1(r);
}

G1 G1::operator-() const {
  blst_p1 r = p_;
  blst_p1_cneg(&r, true);
  return G1(r);
}

G1 G1::operator*(const Scalar& s) const {
  const blst_scalar k = s.to_blst_scalar();
  blst_p1 r;
  blst_p1_mult(&r, &p_, k.b, kScalarBits);
  ++tl_counters.g1_mul;
  return G1(r);
}

G1& G1::operator+=(const G1& o) {
  blst_p1_add_or_double(&p_, &p_, &o.p_);
  ++tl_counters.g1_add;
  return *this;
}

bool G1::is_identity() const { return blst_p1_is_inf(&p_); }

bool G1::operator==(const G1& o) const { return blst_p1_is_equal(&p_, &o.p_); }

std::array<std::uint8_t, kG1Bytes> G1::compress() const {
  std::array<std::uint8_t, kG1Bytes> out;
  blst_p1_compress(out.data(), &p_);
  return out;
}

G1 G1::decompress(std::span<const std::uint8_t> b) {
  if (b.size() != kG1Bytes) throw DecodeError("G1 encoding must be 48 bytes");
  blst_p1_affine a;
  if (blst_p1_uncompress(&a, b.data()) != BLST_SUCCESS) {
    throw DecodeError("invalid G1 encoding");
  }
  if (!blst_p1_affine_in_g1(&a)) throw DecodeError("G1 point not in subgroup");
  return G1(a);
}

blst_p1_affine G1::to_affine() const {
  blst_p1_affine a;
  blst_p1_to_affine(&a, &p_);
  return a;
}

// ---------------------------------------------------------------- G2

G2::G2() : p_{} {}

G2::G2(const blst_p2_affine& a) { blst_p2_from_affine(&p_, &a); }

G2 G2::generator() { return G2(*blst_p2_generator()); }

G2 G2::operator+(const G2& o) const {
  blst_p2 r;
  blst_p2_add_or_double(&r, &p_, &o.p_);
  ++tl_counters.g2_add;
  return G2(r);
}

G2 G2::operator-() const {
  blst_p2 r = p_;
  blst_p2_cneg(&r, true);
  return G2(r);
}

G2 G2::operator*(const Scalar& s) const {
  const blst_scalar k = s.to_blst_scalar();
  blst_p2 r;
  blst_p2_mult(&r, &p_, k.b, kScalarBits);
  ++tl_counters.g2_mul;
  return G2(r);
}

G2& G2::operator+=(const G2& o) {
  blst_p2_add_or_double(&p_, &p_, &o.p_);
  ++tl_counters.g2_add;
  return *this;
}

bool G2::is_identity() const { return blst_p2_is_inf(&p_); }

bool G2::operator==(const G2& o) const { return blst_p2_is_equal(&p_, &o.p_); }

std::array<std::uint8_t, kG2Bytes> G2::compress() const {
  std::array<std::uint8_t, kG2Bytes> out;
  blst_p2_compress(out.data(), &p_);
  return out;
}

G2 G2::decompress(std::span<const std::uint8_t> b) {
  if (b.size() != kG2Bytes) throw DecodeError("G2 encoding must be 96 bytes");
  blst_p2_affine a;
  if (blst_p2_uncompress(&a, b.data()) != BLST_SUCCESS) {
    throw DecodeError("invalid G2 encoding");
  }
  if (!blst_p2_affine_in_g2(&a)) throw DecodeError("G2 point not in subgroup");
  return G2(a);
}

blst_p2_affine G2::to_affine() const {
  blst_p2_affine a;
  blst_p2_to_affine(&a, &p_);
  return a;
}

// ---------------------------------------------------------------- GT

GT::GT() : f_(*blst_fp12_one()) {}

GT GT::operator*(const GT& o) const {
  blst_fp12 r;
  blst_fp12_mul(&r, &f_, &o.f_);
  return GT(r);
}

GT GT::pow(const Scalar& e) const {
  const auto bytes = e.to_bytes();
  blst_fp12 acc = *blst_fp12_one();
  for (std::uint8_t byte : bytes) {
    for (int bit = 7; bit >= 0; --bit) {
      blst_fp12_sqr(&acc, &acc);
      if ((byte >> bit) & 1) blst_fp12_mul(&acc, &acc, &f_);
    }
  }
  return GT(acc);
}

bool GT::is_identity() const { return blst_fp12_is_one(&f_); }

bool GT::operator==(const GT& o) const { return blst_fp12_is_equal(&f_, &o.f_); }

GT pair(const G1& a, const G2& b) {
  ++tl_counters.pairings;
  if (a.is_identity() || b.is_identity()) return GT();
  const blst_p1_affine pa = a.to_affine();
  const blst_p2_affine pb = b.to_affine();
  blst_fp12 ml, out;
  blst_miller_loop(&ml, &pb, &pa);
  blst_final_exp(&out, &ml);
  return GT(out);
}

bool pairing_product_is_identity(std::span<const G1> as,
                                 std::span<const G2> bs) {
  if (as.size() != bs.size()) {
    throw std::invalid_argument("pairing product: length mismatch");
  }
  tl_counters.pairings += as.size();
  blst_fp12 acc = *blst_fp12_one();
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (as[i].is_identity() || bs[i].is_identity()) continue;
    const blst_p1_affine pa = as[i].to_affine();
    const blst_p2_affine pb = bs[i].to_affine();
    blst_fp12 ml;
    blst_miller_loop(&ml, &pb, &pa);
    blst_fp12_mul(&acc, &acc, &ml);
  }
  blst_fp12 out;
  blst_final_exp(&out, &acc);
  return blst_fp12_is_one(&out);
}

// ---------------------------------------------------------------- MSM

std::vector<blst_p1_affine> batch_to_affine(std::span<const G1> points) {
  std::vector<blst_p1_affine> out(points.size());
  if (points.empty()) return out;
  const blst_p1* ptrs[2] = {&points[0].raw(), nullptr};
  static_assert(sizeof(G1) == sizeof(blst_p1));
  blst_p1s_to_affine(out.data(), ptrs, points.size());
  return out;
}

std::vector<blst_p2_affine> batch_to_affine(std::span<const G2> points) {
  std::vector<blst_p2_affine> out(points.size());
  if (points.empty()) return out;
  const blst_p2* ptrs[2] = {&points[0].raw(), nullptr};
  static_assert(sizeof(G2) == sizeof(blst_p2));
  blst_p2s_to_affine(out.data(), ptrs, points.size());
  return out;
}

G1 msm(std::span<const blst_p1_affine> points, std::span<const Scalar> scalars) {
  if (points.size() != scalars.size()) {
    throw std::invalid_argument("msm: points/scalars length mismatch");
  }
  const std::size_t n = points.size();
  tl_counters.g1_mul += n;
  tl_counters.g1_add += n;
  if (n == 0) return G1::identity();
  const auto ks = to_blst_scalars(scalars);
  const blst_p1_affine* pp[2] = {points.data(), nullptr};
  const std::uint8_t* sp[2] = {ks[0].b, nullptr};
  std::vector<limb_t> scratch(
      blst_p1s_mult_pippenger_scratch_sizeof(n) / sizeof(limb_t) + 1);
  blst_p1 r;
  blst_p1s_mult_pippenger(&r, pp, n, sp, kScalarBits, scratch.data());
  return G1(r);
}

G2 msm(std::span<const blst_p2_affine> points, std::span<const Scalar> scalars) {
  if (points.size() != scalars.size()) {
    throw std::invalid_argument("msm: points/scalars length mismatch");
  }
  const std::size_t n = points.size();
  tl_counters.g2_mul += n;
  tl_counters.g2_add += n;
  if (n == 0) return G2::identity();
  const auto ks = to_blst_scalars(scalars);
  const blst_p2_affine* pp[2] = {points.data(), nullptr};
  const std::uint8_t* sp[2] = {ks[0].b, nullptr};
  std::vector<limb_t> scratch(
      blst_p2s_mult_pippenger_scratch_sizeof(n) / sizeof(limb_t) + 1);
  blst_p2 r;
  blst_p2s_mult_pippenger(&r, pp, n, sp, kScalarBits, scratch.data());
  return G2(r);
}

G1 msm(std::span<const G1> points, std::span<const Scalar> scalars) {
  if (points.size() != scalars.size()) {
    throw std::invalid_argument("msm: points/scalars length mismatch");
  }
  const auto aff = batch_to_affine(points);
  return msm(std::span<const blst_p1_affine>(aff), scalars);
}

G2 msm(std::span<const G2> points, std::span<const Scalar> scalars) {
  if (points.size() != scalars.size()) {
    throw std::invalid_argument("msm: points/scalars length mismatch");
  }
  const auto aff = batch_to_affine(points);
  return msm(std::span<const blst_p2_affine>(aff), scalars);
}

// ---------------------------------------------------------------- hashing

std::array<std::uint8_t, 32> sha3_256(std::span<const std::uint8_t> data) {
  Sha3Hasher h;
  h.update(data);
  return h.finish();
}

Sha3Hasher::Sha3Hasher() : ctx_(EVP_MD_CTX_new()) {
  if (ctx_ == nullptr ||
      EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha3_256(),
                        nullptr) != 1) {
    throw std::runtime_error("SHA3-256 unavailable");
  }
}

Sha3Hasher::~Sha3Hasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha3Hasher::update(std::span<const std::uint8_t> data) {
  if (data.empty()) return;
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), data.data(), data.size());
}

std::array<std::uint8_t, 32> Sha3Hasher::finish() {
  std::array<std::uint8_t, 32> out;
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), out.data(), &len);
  return out;
}

// ---------------------------------------------------------------- Rng

Rng::Rng(std::uint64_t seed) {
  std::array<std::uint8_t, 18> msg = {'c', 'o', 'm', 'p', 'i', 'r', '-', 'r',
                                      'n', 'g'};
  for (int i = 0; i < 8; ++i) msg[10 + i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
  seed_ = sha3_256(msg);
}

Rng::Rng(std::span<const std::uint8_t, 32> seed) {
  std::copy(seed.begin(), seed.end(), seed_.begin());
}

Rng Rng::from_entropy() {
  std::array<std::uint8_t, 32> s;
  if (RAND_bytes(s.data(), static_cast<int>(s.size())) != 1) {
    throw std::runtime_error("OS entropy source unavailable");
  }
  return Rng(std::span<const std::uint8_t, 32>(s));
}

void Rng::refill() {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  std::uint8_t counter[8];
  for (int i = 0; i < 8; ++i) counter[i] = static_cast<std::uint8_t>(block_ >> (56 - 8 * i));
  ++block_;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), seed_.data(), seed_.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), counter, sizeof(counter)) != 1 ||
      EVP_DigestFinalXOF(ctx.get(), buf_.data(), buf_.size()) != 1) {
    throw std::runtime_error("SHAKE256 unavailable");
  }
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    const std::size_t take = std::min(out.size() - done, buf_.size() - pos_);
    std::memcpy(out.data() + done, buf_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

bool Rng::next_bit() {
  std::uint8_t b;
  fill(std::span<std::uint8_t>(&b, 1));
  return (b & 1) != 0;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform: zero bound");
  const std::uint64_t limit = max() - (max() % bound + 1) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

Scalar Rng::next_scalar() {
  std::uint8_t b[48];
  fill(b);
  return Scalar::reduce_be(b);
}

Rng Rng::fork() {
  std::array<std::uint8_t, 32> s;
  fill(s);
  return Rng(std::span<const std::uint8_t, 32>(s));
}

}  // namespace compir
