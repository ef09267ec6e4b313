// Copyright 2026-present the arrkit project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace arrkit {

/// Dense numeric matrix produced by the encoder. Column-major: the
/// boosting engine bins and scans one feature at a time.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::vector<std::string> column_names,
                std::vector<std::uint64_t> row_ids);

  std::size_t rows() const { return rows_; }
  std::size_t columns() const { return column_names_.size(); }

  double at(std::size_t row, std::size_t col) const {
    return data_[col * rows_ + row];
  }
  void set(std::size_t row, std::size_t col, double value) {
    data_[col * rows_ + row] = value;
  }

  std::span<const double> column(std::size_t col) const {
    return {data_.data() + col * rows_, rows_};
  }
  std::span<double> column_mut(std::size_t col) {
    return {data_.data() + col * rows_, rows_};
  }

  const std::vector<std::string>& column_names() const { return column_names_; }
  const std::vector<std::uint64_t>& row_ids() const { return row_ids_; }

  std::size_t column_index(const std::string& name) const;  // npos when absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Appends a column; length must match and the name must be new.
  void append_column(const std::string& name, std::span<const double> values);

  /// Copies the selected rows into a new matrix (same columns).
  FeatureMatrix take_rows(std::span<const std::uint32_t> rows) const;

 private:
  std::size_t rows_ = 0;
  std::vector<std::string> column_names_;
  std::vector<std::uint64_t> row_ids_;
  std::vector<double> data_;
};

}  // namespace arrkit
