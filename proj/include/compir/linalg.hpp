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

#ifndef COMPIR_LINALG_HPP_
#define COMPIR_LINALG_HPP_

// Small dense matrices over Z_p. Sizes here are at most 2k x 2k with k a
// handful of servers, so plain Gauss-Jordan is all that is needed.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "compir/groupcore.hpp"

namespace compir {

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static FieldMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  FieldMatrix operator*(const FieldMatrix& o) const;
  std::vector<Scalar> apply(const std::vector<Scalar>& x) const;
  bool operator==(const FieldMatrix& o) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> a_;
};

// Throws SingularMatrix.
FieldMatrix invert(const FieldMatrix& m);
std::vector<Scalar> solve(const FieldMatrix& m, const std::vector<Scalar>& rhs);
Scalar determinant(const FieldMatrix& m);

}  // namespace compir

#endif  // COMPIR_LINALG_HPP_
