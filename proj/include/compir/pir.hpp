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

#ifndef COMPIR_PIR_HPP_
#define COMPIR_PIR_HPP_

// Linear multi-server PIR schemes behind one interface.
//
//   ckgs2  two servers, random subset and its flip at the target index
//   ckgsk  k servers, additive sharing of the unit vector (t = k-1)
//   wy     Woodruff-Yekhanin: weight-d index encoding, servers return the
//          value and gradient of the database polynomial at their share
//   be     block retrieval through a Vandermonde mix of t random rows and
//          the k-t unit rows of the target block
//
// Every answer is a set of linear combinations of database columns; the
// coefficient vectors of those combinations (coeff_vectors) are what the
// commitment layer opens. Item indices in this header are 1-based.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "compir/datahash.hpp"
#include "compir/groupcore.hpp"
#include "compir/linalg.hpp"

namespace compir {

enum class SchemeId : std::uint8_t { kCkgs2 = 1, kCkgsK = 2, kWy = 3, kBe = 4 };

std::string_view scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(std::string_view name);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);  // saturates at 2^63

struct SchemeParams {
  SchemeId scheme = SchemeId::kCkgs2;
  std::size_t k = 2;
  std::size_t t = 1;
  std::size_t n = 1;  // logical items (blocks for be)

  std::size_t d = 0;    // wy: floor((2k-1)/t)
  std::size_t ell = 0;  // wy: least ell with C(ell, d) >= n
  std::vector<Scalar> betas;  // k distinct nonzero evaluation points

  // Validates and derives. Default evaluation points are 1..k.
  static SchemeParams make(SchemeId scheme, std::size_t k, std::size_t t,
                           std::size_t n,
                           std::optional<std::vector<Scalar>> betas = std::nullopt);

  // wy with a smaller encoding weight d (d*t <= 2k-1). Only the default
  // d is expressible on the wire; other weights are for local sweeps.
  SchemeParams with_wy_degree(std::size_t d) const;

  // be: k-t columns per block; 1 otherwise.
  std::size_t width() const;
  // Physical database columns: width() * n.
  std::size_t columns() const;
  std::size_t query_length() const;
  // Linear combinations per server answer: ell+1 for wy, 1 otherwise.
  std::size_t combinations() const;

  bool operator==(const SchemeParams& o) const;
};

struct Query {
  std::vector<Scalar> entries;
  bool operator==(const Query&) const = default;
};

struct Aux {
  int sign = 0;                               // ckgs2: 1 or 2
  std::vector<std::vector<Scalar>> vectors;   // wy: v^(1..t)
};

struct QuerySet {
  std::vector<Query> queries;  // one per server
  Aux aux;
};

// Column-major matrix view; the hash vector is viewed as a 1-row matrix.
struct MatrixView {
  std::size_t rows;
  std::size_t cols;
  std::span<const Scalar> cells;

  static MatrixView of(const Database& db) { return {db.rows(), db.cols(), db.cells()}; }
  static MatrixView row(std::span<const Scalar> h) { return {1, h.size(), h}; }
  const Scalar& at(std::size_t r, std::size_t c) const { return cells[c * rows + r]; }
};

// L linear combinations, each evaluated on all rows: answer[u][row].
using Answer = std::vector<std::vector<Scalar>>;
// Retrieved columns: item[col][row]; width() columns.
using Item = std::vector<std::vector<Scalar>>;

QuerySet queries_gen(const SchemeParams& params, std::size_t index, Rng& rng);
// ckgs2 with a caller-chosen subset (bit j-1 set iff j in J).
QuerySet ckgs2_queries_from_subset(const SchemeParams& params, std::size_t index,
                                   const std::vector<bool>& subset);

Answer answer_gen(const SchemeParams& params, const MatrixView& x, const Query& q);

std::vector<std::vector<Scalar>> coeff_vectors(const SchemeParams& params,
                                               const Query& q);

// answers[j] is server j's answer. Throws std::invalid_argument on shape
// mismatch.
Item extract(const SchemeParams& params, std::size_t index,
             std::span<const Answer> answers, const Aux& aux);

// Weight-d 0/1 vector of length ell: the index-th d-subset of [ell] in
// lexicographic order of support sets.
std::vector<std::uint8_t> wy_encode_index(const SchemeParams& params, std::size_t index);
std::vector<std::uint32_t> wy_support(std::size_t ell, std::size_t d, std::size_t index);

// Degree <= 2k-1 polynomial with the given values and first derivatives at
// the k points. Returns coefficients in ascending degree.
std::vector<Scalar> wy_hermite_solve(std::span<const Scalar> betas,
                                     std::span<const Scalar> values,
                                     std::span<const Scalar> derivs);
// Confluent Vandermonde matrix: row 2j is (beta_j^e), row 2j+1 is
// (e beta_j^{e-1}), e = 0..2k-1.
FieldMatrix confluent_vandermonde(std::span<const Scalar> betas);

struct BeMatrices {
  FieldMatrix v;
  FieldMatrix v_inv;
  // Row layout of M: the first t rows are random, row t+r (r = 0..k-t-1)
  // is the unit vector of column r of the target block.
  std::size_t random_rows = 0;
  std::size_t unit_rows = 0;
};

BeMatrices be_matrices(const SchemeParams& params);

// Matrix mapping the t random vectors onto the queries of the servers in
// `subset` (0-based server ids): [beta_j^s] for wy, [beta_j^{s-1}] for be.
FieldMatrix privacy_transfer_matrix(const SchemeParams& params,
                                    std::span<const std::size_t> subset);

}  // namespace compir

#endif  // COMPIR_PIR_HPP_
