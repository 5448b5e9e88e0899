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

#include "compir/datahash.hpp"

#include <stdexcept>

#include "compir/serial.hpp"

namespace compir {

namespace {
constexpr std::uint8_t kDbVersion = 1;
}

Database::Database(std::size_t rows, std::size_t cols)
    : Database(rows, cols, std::vector<Scalar>(rows * cols)) {}

Database::Database(std::size_t rows, std::size_t cols, std::vector<Scalar> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("database needs at least one row and one column");
  }
  if (cells_.size() != rows * cols) {
    throw std::invalid_argument("database cell count does not match m*n");
  }
}

Database Database::random(std::size_t rows, std::size_t cols, Rng& rng) {
  std::vector<Scalar> cells(rows * cols);
  for (auto& c : cells) c = rng.next_scalar();
  return Database(rows, cols, std::move(cells));
}

Bytes Database::serialize() const {
  ByteWriter w;
  w.reserve(13 + cells_.size() * kScalarBytes);
  w.raw(std::string_view("CPDB"));
  w.u8(kDbVersion);
  w.u32(static_cast<std::uint32_t>(rows_));
  w.u32(static_cast<std::uint32_t>(cols_));
  for (const auto& c : cells_) w.scalar(c);
  return w.take();
}

Database Database::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.str(4) != "CPDB") throw DecodeError("db: bad magic");
  if (r.u8() != kDbVersion) throw DecodeError("db: unsupported version");
  const std::size_t m = r.u32();
  const std::size_t n = r.u32();
  if (m == 0 || n == 0) throw DecodeError("db: empty dimension");
  if (r.remaining() != m * n * kScalarBytes) throw DecodeError("db: body size mismatch");
  std::vector<Scalar> cells(m * n);
  for (auto& c : cells) c = r.scalar();
  return Database(m, n, std::move(cells));
}

void Database::save(const std::filesystem::path& path) const {
  write_file(path, serialize());
}

Database Database::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

Scalar hash_item(std::span<const Scalar> column) {
  if (column.empty()) throw std::invalid_argument("hash_item: empty column");
  Sha3Hasher h;
  // Encode in chunks to bound the staging buffer.
  std::array<std::uint8_t, 64 * kScalarBytes> buf;
  std::size_t i = 0;
  while (i < column.size()) {
    std::size_t k = 0;
    for (; k < 64 && i < column.size(); ++k, ++i) {
      column[i].write_to(buf.data() + k * kScalarBytes);
    }
    h.update(std::span<const std::uint8_t>(buf.data(), k * kScalarBytes));
  }
  return Scalar::from_wide_bytes(h.finish());
}

std::vector<Scalar> hash_database(const Database& db) {
  std::vector<Scalar> h(db.cols());
  for (std::size_t j = 0; j < db.cols(); ++j) h[j] = hash_item(db.column(j));
  return h;
}

}  // namespace compir
