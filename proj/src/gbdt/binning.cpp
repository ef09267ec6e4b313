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

#include <algorithm>
#include <cmath>

#include "arrkit/errors.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/parallel.hpp"

namespace arrkit::gbdt {

namespace {

// Thresholds for one feature. A threshold is the upper value bound of its
// bin; the last distinct value never becomes a threshold (its bin is the
// implicit final one).
std::vector<double> feature_thresholds(std::span<const double> column,
                                       int max_bins) {
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());

  // distinct values with multiplicities
  std::vector<std::pair<double, std::size_t>> distinct;
  for (double v : sorted) {
    if (distinct.empty() || distinct.back().first != v) {
      distinct.emplace_back(v, 1);
    } else {
      ++distinct.back().second;
    }
  }

  std::vector<double> thresholds;
  if (distinct.size() <= 1) return thresholds;  // constant feature: one bin

  if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
    thresholds.reserve(distinct.size() - 1);
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
      thresholds.push_back(distinct[i].first);
    }
    return thresholds;
  }

  // Quantile binning: cut when the cumulative count crosses the next
  // multiple of n / max_bins.
  const double per_bin = static_cast<double>(sorted.size()) / max_bins;
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    cumulative += distinct[i].second;
    std::size_t bins_made = thresholds.size();
    if (bins_made + 1 >= static_cast<std::size_t>(max_bins)) break;
    if (static_cast<double>(cumulative) >=
        static_cast<double>(bins_made + 1) * per_bin) {
      thresholds.push_back(distinct[i].first);
    }
  }
  return thresholds;
}

}  // namespace

BinMapper BinMapper::build(const FeatureMatrix& matrix, int max_bins) {
  if (matrix.rows() == 0 || matrix.columns() == 0) {
    throw InvalidArgumentError("BinMapper::build: empty matrix");
  }
  if (max_bins < 2 || max_bins > 256) {
    throw ConfigError("max_bins must be in [2, 256]");
  }
  std::vector<std::vector<double>> thresholds(matrix.columns());
  parallel::parallel_for(matrix.columns(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      thresholds[f] = feature_thresholds(matrix.column(f), max_bins);
    }
  });
  BinMapper mapper;
  mapper.set_thresholds(std::move(thresholds));
  return mapper;
}

int BinMapper::bin_index(std::size_t feature, double value) const {
  const auto& t = thresholds_[feature];
  // number of thresholds < value == index of first threshold >= value
  return static_cast<int>(std::lower_bound(t.begin(), t.end(), value) - t.begin());
}

std::size_t BinMapper::total_bins() const {
  std::size_t total = 0;
  for (std::size_t f = 0; f < feature_count(); ++f) total += bin_count(f);
  return total;
}

BinnedMatrix BinnedMatrix::build(const FeatureMatrix& matrix,
                                 const BinMapper& mapper) {
  if (matrix.columns() != mapper.feature_count()) {
    throw SchemaError("BinnedMatrix::build: feature count mismatch");
  }
  BinnedMatrix binned;
  binned.rows_ = matrix.rows();
  binned.columns_.resize(matrix.columns());
  parallel::parallel_for(matrix.columns(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t f = begin; f < end; ++f) {
      auto column = matrix.column(f);
      auto& bins = binned.columns_[f];
      bins.resize(column.size());
      for (std::size_t i = 0; i < column.size(); ++i) {
        bins[i] = static_cast<std::uint8_t>(mapper.bin_index(f, column[i]));
      }
    }
  });
  return binned;
}

}  // namespace arrkit::gbdt
