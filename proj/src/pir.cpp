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

#include "compir/pir.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <string>

namespace compir {

namespace {

constexpr std::uint64_t kBinomialCap = std::uint64_t{1} << 63;
constexpr std::size_t kMaxServers = 255;

void check_index(const SchemeParams& p, std::size_t index) {
  if (index < 1 || index > p.n) {
    throw std::invalid_argument("item index " + std::to_string(index) +
                                " outside [1, " + std::to_string(p.n) + "]");
  }
}

void check_query(const SchemeParams& p, const Query& q) {
  if (q.entries.size() != p.query_length()) {
    throw std::invalid_argument("query length does not match scheme parameters");
  }
}

// Value of the monomial prod_{u in S} q_u and its partial derivatives
// with respect to each z_u, u in S.
struct MonomialEval {
  Scalar value;
  std::vector<Scalar> partials;  // aligned with the support
};

MonomialEval eval_monomial(std::span<const std::uint32_t> support,
                           std::span<const Scalar> q) {
  const std::size_t d = support.size();
  MonomialEval out;
  out.partials.resize(d);
  // prefix[i] = prod of the first i factors; partial_i = prefix[i] * suffix.
  std::vector<Scalar> prefix(d + 1);
  prefix[0] = Scalar::one();
  for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] * q[support[i]];
  Scalar suffix = Scalar::one();
  for (std::size_t i = d; i-- > 0;) {
    out.partials[i] = prefix[i] * suffix;
    suffix *= q[support[i]];
  }
  out.value = prefix[d];
  return out;
}

// acc[r] += coeff * col[r]; multiplication skipped for 0 and 1.
void axpy(std::vector<Scalar>& acc, const Scalar& coeff, std::span<const Scalar> col) {
  if (coeff.is_zero()) return;
  if (coeff == Scalar::one()) {
    for (std::size_t r = 0; r < col.size(); ++r) acc[r] += col[r];
    return;
  }
  for (std::size_t r = 0; r < col.size(); ++r) acc[r] += coeff * col[r];
}

std::span<const Scalar> column_of(const MatrixView& x, std::size_t j) {
  return x.cells.subspan(j * x.rows, x.rows);
}

void check_betas(std::span<const Scalar> betas) {
  for (std::size_t a = 0; a < betas.size(); ++a) {
    if (betas[a].is_zero()) throw std::invalid_argument("evaluation points must be nonzero");
    for (std::size_t b = a + 1; b < betas.size(); ++b) {
      if (betas[a] == betas[b]) {
        throw std::invalid_argument("evaluation points must be distinct");
      }
    }
  }
}

}  // namespace

std::string_view scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::kCkgs2: return "ckgs2";
    case SchemeId::kCkgsK: return "ckgsk";
    case SchemeId::kWy: return "wy";
    case SchemeId::kBe: return "be";
  }
  return "unknown";
}

std::optional<SchemeId> parse_scheme(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::erase(s, '-');
  if (s == "ckgs2" || s == "2ckgs") return SchemeId::kCkgs2;
  if (s == "ckgsk" || s == "kckgs") return SchemeId::kCkgsK;
  if (s == "wy") return SchemeId::kWy;
  if (s == "be") return SchemeId::kBe;
  return std::nullopt;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
    if (r >= kBinomialCap) return kBinomialCap;
  }
  return static_cast<std::uint64_t>(r);
}

SchemeParams SchemeParams::make(SchemeId scheme, std::size_t k, std::size_t t,
                                std::size_t n,
                                std::optional<std::vector<Scalar>> betas) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (k < 2 || k > kMaxServers) throw std::invalid_argument("k must be in [2, 255]");
  if (t < 1 || t >= k) throw std::invalid_argument("t must satisfy 1 <= t < k");
  switch (scheme) {
    case SchemeId::kCkgs2:
      if (k != 2 || t != 1) throw std::invalid_argument("ckgs2 requires k=2, t=1");
      break;
    case SchemeId::kCkgsK:
      if (t != k - 1) throw std::invalid_argument("ckgsk requires t = k-1");
      break;
    case SchemeId::kWy:
    case SchemeId::kBe:
      break;
    default:
      throw std::invalid_argument("unknown scheme id");
  }

  SchemeParams p;
  p.scheme = scheme;
  p.k = k;
  p.t = t;
  p.n = n;
  if (betas) {
    if (betas->size() != k) throw std::invalid_argument("need exactly k evaluation points");
    p.betas = std::move(*betas);
  } else {
    for (std::size_t j = 1; j <= k; ++j) p.betas.push_back(Scalar::from_u64(j));
  }
  check_betas(p.betas);

  if (scheme == SchemeId::kWy) {
    p = p.with_wy_degree((2 * k - 1) / t);
  }
  if (p.columns() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("database too large");
  }
  return p;
}

SchemeParams SchemeParams::with_wy_degree(std::size_t degree) const {
  if (scheme != SchemeId::kWy) throw std::invalid_argument("not a wy scheme");
  if (degree < 1 || degree * t > 2 * k - 1) {
    throw std::invalid_argument("wy: need 1 <= d and d*t <= 2k-1");
  }
  SchemeParams p = *this;
  p.d = degree;
  std::size_t ell = degree;
  while (binomial(ell, degree) < n) ++ell;
  p.ell = ell;
  return p;
}

std::size_t SchemeParams::width() const {
  return scheme == SchemeId::kBe ? k - t : 1;
}

std::size_t SchemeParams::columns() const { return width() * n; }

std::size_t SchemeParams::query_length() const {
  return scheme == SchemeId::kWy ? ell : columns();
}

std::size_t SchemeParams::combinations() const {
  return scheme == SchemeId::kWy ? ell + 1 : 1;
}

bool SchemeParams::operator==(const SchemeParams& o) const {
  return scheme == o.scheme && k == o.k && t == o.t && n == o.n && d == o.d &&
         ell == o.ell && betas == o.betas;
}

// ---------------------------------------------------------------- WY encoding

std::vector<std::uint32_t> wy_support(std::size_t ell, std::size_t d, std::size_t index) {
  if (index < 1 || index > binomial(ell, d)) {
    throw std::invalid_argument("wy index outside [1, C(ell, d)]");
  }
  std::vector<std::uint32_t> support;
  support.reserve(d);
  std::uint64_t rank = index - 1;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < d; ++pos) {
    for (std::size_t x = next; x < ell; ++x) {
      // Subsets whose pos-th element is x: choose the rest from (x, ell).
      const std::uint64_t count = binomial(ell - x - 1, d - pos - 1);
      if (rank < count) {
        support.push_back(static_cast<std::uint32_t>(x));
        next = x + 1;
        break;
      }
      rank -= count;
    }
  }
  return support;
}

std::vector<std::uint8_t> wy_encode_index(const SchemeParams& params, std::size_t index) {
  if (params.scheme != SchemeId::kWy) throw std::invalid_argument("not a wy scheme");
  check_index(params, index);
  std::vector<std::uint8_t> bits(params.ell, 0);
  for (auto u : wy_support(params.ell, params.d, index)) bits[u] = 1;
  return bits;
}

// ---------------------------------------------------------------- queries

QuerySet ckgs2_queries_from_subset(const SchemeParams& params, std::size_t index,
                                   const std::vector<bool>& subset) {
  if (params.scheme != SchemeId::kCkgs2) throw std::invalid_argument("not a ckgs2 scheme");
  check_index(params, index);
  if (subset.size() != params.n) throw std::invalid_argument("subset size must be n");
  QuerySet qs;
  Query q1, q2;
  q1.entries.resize(params.n);
  for (std::size_t j = 0; j < params.n; ++j) {
    q1.entries[j] = subset[j] ? Scalar::one() : Scalar::zero();
  }
  q2 = q1;
  const bool in_subset = subset[index - 1];
  q2.entries[index - 1] = in_subset ? Scalar::zero() : Scalar::one();
  qs.aux.sign = in_subset ? 1 : 2;
  qs.queries = {std::move(q1), std::move(q2)};
  return qs;
}

QuerySet queries_gen(const SchemeParams& params, std::size_t index, Rng& rng) {
  check_index(params, index);
  const std::size_t k = params.k;
  QuerySet qs;
  switch (params.scheme) {
    case SchemeId::kCkgs2: {
      std::vector<bool> subset(params.n);
      for (std::size_t j = 0; j < params.n; ++j) subset[j] = rng.next_bit();
      return ckgs2_queries_from_subset(params, index, subset);
    }
    case SchemeId::kCkgsK: {
      qs.queries.resize(k);
      Query last;
      last.entries.assign(params.n, Scalar::zero());
      last.entries[index - 1] = Scalar::one();
      for (std::size_t j = 0; j + 1 < k; ++j) {
        auto& e = qs.queries[j].entries;
        e.resize(params.n);
        for (std::size_t c = 0; c < params.n; ++c) {
          e[c] = rng.next_scalar();
          last.entries[c] -= e[c];
        }
      }
      qs.queries[k - 1] = std::move(last);
      return qs;
    }
    case SchemeId::kWy: {
      const std::size_t ell = params.ell;
      qs.aux.vectors.resize(params.t);
      for (auto& v : qs.aux.vectors) {
        v.resize(ell);
        for (auto& s : v) s = rng.next_scalar();
      }
      const auto enc = wy_encode_index(params, index);
      qs.queries.resize(k);
      for (std::size_t j = 0; j < k; ++j) {
        auto& e = qs.queries[j].entries;
        e.resize(ell);
        for (std::size_t u = 0; u < ell; ++u) e[u] = enc[u] ? Scalar::one() : Scalar::zero();
        Scalar power = params.betas[j];
        for (std::size_t s = 0; s < params.t; ++s) {
          for (std::size_t u = 0; u < ell; ++u) e[u] += power * qs.aux.vectors[s][u];
          power *= params.betas[j];
        }
      }
      return qs;
    }
    case SchemeId::kBe: {
      const std::size_t cols = params.columns();
      const std::size_t w = params.width();
      std::vector<std::vector<Scalar>> randoms(params.t, std::vector<Scalar>(cols));
      for (auto& v : randoms) {
        for (auto& s : v) s = rng.next_scalar();
      }
      qs.queries.resize(k);
      for (std::size_t a = 0; a < k; ++a) {
        auto& e = qs.queries[a].entries;
        e.assign(cols, Scalar::zero());
        // Row a of V M with V = (beta_a^{b-1}).
        Scalar power = Scalar::one();
        for (std::size_t s = 0; s < params.t; ++s) {
          for (std::size_t c = 0; c < cols; ++c) e[c] += power * randoms[s][c];
          power *= params.betas[a];
        }
        for (std::size_t r = 0; r < w; ++r) {
          e[(index - 1) * w + r] += power;
          power *= params.betas[a];
        }
      }
      return qs;
    }
  }
  throw std::invalid_argument("unknown scheme");
}

// ---------------------------------------------------------------- answers

Answer answer_gen(const SchemeParams& params, const MatrixView& x, const Query& q) {
  check_query(params, q);
  if (x.cols != params.columns()) {
    throw std::invalid_argument("database columns do not match scheme parameters");
  }
  if (x.rows == 0 || x.cells.size() != x.rows * x.cols) {
    throw std::invalid_argument("malformed database view");
  }
  if (params.scheme != SchemeId::kWy) {
    Answer a(1, std::vector<Scalar>(x.rows));
    for (std::size_t j = 0; j < x.cols; ++j) axpy(a[0], q.entries[j], column_of(x, j));
    return a;
  }
  // F_x(z) = sum_j x_j prod_{u in E(j)} z_u, evaluated with its gradient.
  Answer a(params.ell + 1, std::vector<Scalar>(x.rows));
  for (std::size_t j = 0; j < x.cols; ++j) {
    const auto support = wy_support(params.ell, params.d, j + 1);
    const auto mono = eval_monomial(support, q.entries);
    const auto col = column_of(x, j);
    axpy(a[0], mono.value, col);
    for (std::size_t i = 0; i < support.size(); ++i) {
      axpy(a[1 + support[i]], mono.partials[i], col);
    }
  }
  return a;
}

std::vector<std::vector<Scalar>> coeff_vectors(const SchemeParams& params,
                                               const Query& q) {
  check_query(params, q);
  if (params.scheme != SchemeId::kWy) return {q.entries};
  const std::size_t cols = params.columns();
  std::vector<std::vector<Scalar>> out(params.ell + 1, std::vector<Scalar>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    const auto support = wy_support(params.ell, params.d, j + 1);
    const auto mono = eval_monomial(support, q.entries);
    out[0][j] = mono.value;
    for (std::size_t i = 0; i < support.size(); ++i) {
      out[1 + support[i]][j] = mono.partials[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------- extraction

FieldMatrix confluent_vandermonde(std::span<const Scalar> betas) {
  check_betas(betas);
  const std::size_t k = betas.size();
  const std::size_t dim = 2 * k;
  FieldMatrix h(dim, dim);
  for (std::size_t j = 0; j < k; ++j) {
    Scalar power = Scalar::one();  // beta^e
    Scalar prev = Scalar::zero();  // beta^{e-1}
    for (std::size_t e = 0; e < dim; ++e) {
      h(2 * j, e) = power;
      h(2 * j + 1, e) = Scalar::from_u64(e) * prev;
      prev = power;
      power *= betas[j];
    }
  }
  return h;
}

std::vector<Scalar> wy_hermite_solve(std::span<const Scalar> betas,
                                     std::span<const Scalar> values,
                                     std::span<const Scalar> derivs) {
  if (values.size() != betas.size() || derivs.size() != betas.size()) {
    throw std::invalid_argument("hermite: need one value and derivative per point");
  }
  const FieldMatrix h = confluent_vandermonde(betas);
  std::vector<Scalar> rhs(2 * betas.size());
  for (std::size_t j = 0; j < betas.size(); ++j) {
    rhs[2 * j] = values[j];
    rhs[2 * j + 1] = derivs[j];
  }
  return solve(h, rhs);
}

BeMatrices be_matrices(const SchemeParams& params) {
  check_betas(params.betas);
  const std::size_t k = params.k;
  BeMatrices out;
  out.v = FieldMatrix(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    Scalar power = Scalar::one();
    for (std::size_t b = 0; b < k; ++b) {
      out.v(a, b) = power;
      power *= params.betas[a];
    }
  }
  out.v_inv = invert(out.v);
  out.random_rows = params.t;
  out.unit_rows = k - params.t;
  return out;
}

FieldMatrix privacy_transfer_matrix(const SchemeParams& params,
                                    std::span<const std::size_t> subset) {
  if (subset.size() != params.t) throw std::invalid_argument("subset must have t servers");
  FieldMatrix m(params.t, params.t);
  for (std::size_t r = 0; r < subset.size(); ++r) {
    const std::size_t j = subset[r];
    if (j >= params.k) throw std::invalid_argument("server id out of range");
    switch (params.scheme) {
      case SchemeId::kWy:
      case SchemeId::kBe: {
        Scalar power = params.scheme == SchemeId::kWy ? params.betas[j] : Scalar::one();
        for (std::size_t s = 0; s < params.t; ++s) {
          m(r, s) = power;
          power *= params.betas[j];
        }
        break;
      }
      case SchemeId::kCkgsK:
        // Server j < k-1 receives random share j; the last server receives
        // e_i minus the sum of all shares.
        for (std::size_t s = 0; s < params.t; ++s) {
          if (j + 1 == params.k) {
            m(r, s) = -Scalar::one();
          } else if (s == j) {
            m(r, s) = Scalar::one();
          }
        }
        break;
      case SchemeId::kCkgs2:
        throw std::invalid_argument("ckgs2 queries are not a field-linear mix");
    }
  }
  return m;
}

Item extract(const SchemeParams& params, std::size_t index,
             std::span<const Answer> answers, const Aux& aux) {
  check_index(params, index);
  if (answers.size() != params.k) throw std::invalid_argument("need one answer per server");
  const std::size_t combos = params.combinations();
  std::size_t m = 0;
  for (const auto& a : answers) {
    if (a.size() != combos) throw std::invalid_argument("answer has wrong combination count");
    for (const auto& row : a) {
      if (m == 0) m = row.size();
      if (row.size() != m || m == 0) throw std::invalid_argument("answer rows are ragged");
    }
  }

  switch (params.scheme) {
    case SchemeId::kCkgs2: {
      if (aux.sign != 1 && aux.sign != 2) throw std::invalid_argument("ckgs2 aux must be 1 or 2");
      const auto& plus = answers[aux.sign == 1 ? 0 : 1][0];
      const auto& minus = answers[aux.sign == 1 ? 1 : 0][0];
      std::vector<Scalar> item(m);
      for (std::size_t r = 0; r < m; ++r) item[r] = plus[r] - minus[r];
      return {item};
    }
    case SchemeId::kCkgsK: {
      std::vector<Scalar> item(m);
      for (const auto& a : answers) {
        for (std::size_t r = 0; r < m; ++r) item[r] += a[0][r];
      }
      return {item};
    }
    case SchemeId::kWy: {
      const std::size_t k = params.k;
      const std::size_t ell = params.ell;
      if (aux.vectors.size() != params.t) throw std::invalid_argument("wy aux must hold t vectors");
      for (const auto& v : aux.vectors) {
        if (v.size() != ell) throw std::invalid_argument("wy aux vector has wrong length");
      }
      // d/dy of E(i)_u + sum_s y^s v^(s)_u at beta_j.
      std::vector<std::vector<Scalar>> slope(k, std::vector<Scalar>(ell));
      for (std::size_t j = 0; j < k; ++j) {
        Scalar power = Scalar::one();  // beta_j^{s-1}
        for (std::size_t s = 1; s <= params.t; ++s) {
          const Scalar f = Scalar::from_u64(s) * power;
          for (std::size_t u = 0; u < ell; ++u) slope[j][u] += f * aux.vectors[s - 1][u];
          power *= params.betas[j];
        }
      }
      // f(0) is the constant coefficient: row 0 of the inverse confluent
      // Vandermonde matrix applied to (f(b_1), f'(b_1), ..., f'(b_k)).
      const FieldMatrix hinv = invert(confluent_vandermonde(params.betas));
      std::vector<Scalar> item(m);
      for (std::size_t r = 0; r < m; ++r) {
        Scalar acc;
        for (std::size_t j = 0; j < k; ++j) {
          Scalar deriv;
          for (std::size_t u = 0; u < ell; ++u) {
            if (!slope[j][u].is_zero()) deriv += answers[j][1 + u][r] * slope[j][u];
          }
          acc += hinv(0, 2 * j) * answers[j][0][r] + hinv(0, 2 * j + 1) * deriv;
        }
        item[r] = acc;
      }
      return {item};
    }
    case SchemeId::kBe: {
      const auto mats = be_matrices(params);
      Item block(params.width(), std::vector<Scalar>(m));
      for (std::size_t c = 0; c < params.width(); ++c) {
        for (std::size_t j = 0; j < params.k; ++j) {
          const Scalar& coeff = mats.v_inv(params.t + c, j);
          for (std::size_t r = 0; r < m; ++r) block[c][r] += coeff * answers[j][0][r];
        }
      }
      return block;
    }
  }
  throw std::invalid_argument("unknown scheme");
}

}  // namespace compir
