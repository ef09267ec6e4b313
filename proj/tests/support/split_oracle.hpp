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

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace arrkit::test {

// Exhaustive split search straight from the definition: for every feature
// and every boundary between consecutive distinct values, partition the
// raw rows and compute
//   gain = GL^2/(HL+l2) + GR^2/(HR+l2) - GP^2/(HP+l2).
// Thresholds are indexed exactly like lossless bins (candidate i splits at
// the i-th distinct value), so the result is directly comparable with the
// engine's (feature, bin, gain). Independent of the histogram path: no
// binning, no prefix scans, O(features * distinct * rows).

struct OracleSplit {
  int feature = -1;
  int threshold_index = -1;  // == bin index under lossless binning
  double gain = 0.0;
};

struct OracleDataset {
  // column-major feature values: features[f][row]
  std::vector<std::vector<double>> features;
  std::vector<double> grads;
  std::vector<double> hessians;
};

inline std::optional<OracleSplit> brute_force_best_split(
    const OracleDataset& data, double lambda, int min_samples_leaf) {
  const std::size_t n = data.grads.size();
  long double gp = 0.0L, hp = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    gp += data.grads[i];
    hp += data.hessians[i];
  }
  const long double parent_term = (gp * gp) / (hp + lambda);

  std::optional<OracleSplit> best;
  for (std::size_t f = 0; f < data.features.size(); ++f) {
    const auto& column = data.features[f];
    std::vector<double> distinct(column.begin(), column.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t t = 0; t + 1 < distinct.size(); ++t) {
      const double threshold = distinct[t];
      long double gl = 0.0L, hl = 0.0L;
      std::size_t left_count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (column[i] <= threshold) {
          gl += data.grads[i];
          hl += data.hessians[i];
          ++left_count;
        }
      }
      std::size_t right_count = n - left_count;
      if (left_count < static_cast<std::size_t>(min_samples_leaf) ||
          right_count < static_cast<std::size_t>(min_samples_leaf)) {
        continue;
      }
      long double gr = gp - gl;
      long double hr = hp - hl;
      if (hl + lambda == 0.0L || hr + lambda == 0.0L) continue;
      long double gain =
          (gl * gl) / (hl + lambda) + (gr * gr) / (hr + lambda) - parent_term;
      if (!(gain > 0.0L)) continue;
      if (!best || gain > static_cast<long double>(best->gain)) {
        best = OracleSplit{static_cast<int>(f), static_cast<int>(t),
                           static_cast<double>(gain)};
      }
    }
  }
  return best;
}

}  // namespace arrkit::test
