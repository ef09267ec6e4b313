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

#include "arrkit/feature_matrix.hpp"

#include <algorithm>

#include "arrkit/errors.hpp"

namespace arrkit {

FeatureMatrix::FeatureMatrix(std::size_t rows,
                             std::vector<std::string> column_names,
                             std::vector<std::uint64_t> row_ids)
    : rows_(rows),
      column_names_(std::move(column_names)),
      row_ids_(std::move(row_ids)),
      data_(rows * column_names_.size(), 0.0) {
  if (!row_ids_.empty() && row_ids_.size() != rows_) {
    throw InvalidArgumentError("FeatureMatrix: row_ids length mismatch");
  }
  for (std::size_t i = 0; i < column_names_.size(); ++i) {
    for (std::size_t j = i + 1; j < column_names_.size(); ++j) {
      if (column_names_[i] == column_names_[j]) {
        throw InvalidArgumentError("FeatureMatrix: duplicate column name '" +
                                   column_names_[i] + "'");
      }
    }
  }
}

std::size_t FeatureMatrix::column_index(const std::string& name) const {
  auto it = std::find(column_names_.begin(), column_names_.end(), name);
  return it == column_names_.end()
             ? npos
             : static_cast<std::size_t>(it - column_names_.begin());
}

void FeatureMatrix::append_column(const std::string& name,
                                  std::span<const double> values) {
  if (values.size() != rows_) {
    throw InvalidArgumentError("append_column '" + name + "': expected " +
                               std::to_string(rows_) + " values, got " +
                               std::to_string(values.size()));
  }
  if (column_index(name) != npos) {
    throw InvalidArgumentError("append_column: column '" + name +
                               "' already exists");
  }
  column_names_.push_back(name);
  data_.insert(data_.end(), values.begin(), values.end());
}

FeatureMatrix FeatureMatrix::take_rows(std::span<const std::uint32_t> rows) const {
  std::vector<std::uint64_t> ids;
  if (!row_ids_.empty()) {
    ids.reserve(rows.size());
    for (std::uint32_t r : rows) ids.push_back(row_ids_[r]);
  }
  FeatureMatrix out(rows.size(), column_names_, std::move(ids));
  for (std::size_t c = 0; c < columns(); ++c) {
    const double* src = data_.data() + c * rows_;
    double* dst = out.data_.data() + c * rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

}  // namespace arrkit
