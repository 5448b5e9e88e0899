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

#ifndef COMPIR_DATAHASH_HPP_
#define COMPIR_DATAHASH_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "compir/groupcore.hpp"

namespace compir {

// m x n matrix of scalars stored column-major; column j is item j.
// Columns are 0-based here.
class Database {
 public:
  Database(std::size_t rows, std::size_t cols);
  Database(std::size_t rows, std::size_t cols, std::vector<Scalar> cells);

  static Database random(std::size_t rows, std::size_t cols, Rng& rng);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const Scalar> column(std::size_t j) const {
    return {cells_.data() + j * rows_, rows_};
  }
  std::span<Scalar> column(std::size_t j) { return {cells_.data() + j * rows_, rows_}; }
  const Scalar& at(std::size_t row, std::size_t col) const {
    return cells_[col * rows_ + row];
  }
  Scalar& at(std::size_t row, std::size_t col) { return cells_[col * rows_ + row]; }
  std::span<const Scalar> cells() const { return cells_; }

  // "CPDB" | version u8 | m u32 | n u32 | m*n scalars, column-major.
  Bytes serialize() const;
  static Database deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static Database load(const std::filesystem::path& path);

  bool operator==(const Database& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && cells_ == o.cells_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> cells_;
};

// SHA3-256 over the 32-byte big-endian encodings of the column entries in
// row order, reduced mod p.
Scalar hash_item(std::span<const Scalar> column);

std::vector<Scalar> hash_database(const Database& db);

}  // namespace compir

#endif  // COMPIR_DATAHASH_HPP_
