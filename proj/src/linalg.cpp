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

#include "compir/linalg.hpp"

#include <utility>

namespace compir {

FieldMatrix FieldMatrix::identity(std::size_t n) {
  FieldMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one();
  return m;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  FieldMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
    }
  }
  return out;
}

std::vector<Scalar> FieldMatrix::apply(const std::vector<Scalar>& x) const {
  if (x.size() != cols_) throw std::invalid_argument("matrix apply: shape mismatch");
  std::vector<Scalar> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
  }
  return out;
}

namespace {

// Reduces [m | aug] in place to [I | m^{-1} aug]; returns det(m).
Scalar gauss_jordan(FieldMatrix& m, FieldMatrix& aug) {
  const std::size_t n = m.rows();
  Scalar det = Scalar::one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return Scalar::zero();
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(pivot, j));
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(col, j), aug(pivot, j));
      det = -det;
    }
    det *= m(col, col);
    const Scalar inv = m(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) m(col, j) *= inv;
    for (std::size_t j = 0; j < aug.cols(); ++j) aug(col, j) *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col).is_zero()) continue;
      const Scalar f = m(r, col);
      for (std::size_t j = 0; j < n; ++j) m(r, j) -= f * m(col, j);
      for (std::size_t j = 0; j < aug.cols(); ++j) aug(r, j) -= f * aug(col, j);
    }
  }
  return det;
}

void require_square(const FieldMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
}

}  // namespace

FieldMatrix invert(const FieldMatrix& m) {
  require_square(m);
  FieldMatrix work = m;
  FieldMatrix inv = FieldMatrix::identity(m.rows());
  if (gauss_jordan(work, inv).is_zero()) throw SingularMatrix("matrix is singular");
  return inv;
}

std::vector<Scalar> solve(const FieldMatrix& m, const std::vector<Scalar>& rhs) {
  require_square(m);
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
  FieldMatrix work = m;
  FieldMatrix b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  if (gauss_jordan(work, b).is_zero()) throw SingularMatrix("matrix is singular");
  std::vector<Scalar> x(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) x[i] = b(i, 0);
  return x;
}

Scalar determinant(const FieldMatrix& m) {
  require_square(m);
  FieldMatrix work = m;
  FieldMatrix none(m.rows(), 0);
  return gauss_jordan(work, none);
}

}  // namespace compir
