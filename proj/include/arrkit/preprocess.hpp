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

#include <span>
#include <string>
#include <vector>

#include "arrkit/dataset.hpp"
#include "arrkit/feature_matrix.hpp"
#include "arrkit/features.hpp"

namespace arrkit {

struct EncoderOptions {
  /// Features whose category lists are truncated to the top_k most
  /// frequent training categories plus an "(other)" bucket.
  std::vector<std::string> high_cardinality = {"emp_title", "zip_code",
                                               "addr_state"};
  std::size_t top_k_categories = 50;
};

/// Fit-on-train encoding state. All statistics come from the training
/// split only; applying the spec to any other table reuses them as-is.
struct EncoderSpec {
  struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    // numeric: min-max range and raw-scale imputation value (train median)
    double min = 0.0, max = 0.0, impute = 0.0;
    // categorical: ordered by descending train frequency, name as tiebreak.
    // Missing cells observed at fit time appear as the "(missing)" category.
    std::vector<std::string> categories;
    bool has_other_bucket = false;
  };
  std::vector<Feature> features;

  /// Column names of the encoded matrix, in order.
  std::vector<std::string> output_columns() const;
};

/// Token used for missing categorical cells.
inline constexpr const char* kMissingCategory = "(missing)";
/// Column suffix of the overflow bucket for truncated categoricals.
inline constexpr const char* kOtherCategory = "(other)";

/// Learns category lists and numeric min/max/median from the training
/// table. Throws DataError when a numeric feature has no observed value.
EncoderSpec fit_encoder(const LoanTable& train,
                        std::span<const std::string> retained_features,
                        const EncoderOptions& options = {});

/// Categories seen at transform time that the encoder does not know.
/// Rows hitting a feature without an "(other)" bucket get an all-zero
/// group and are counted here.
struct TransformReport {
  struct UnseenCategory {
    std::string feature;
    std::string category;
    std::size_t count = 0;
    bool routed_to_other = false;
  };
  std::vector<UnseenCategory> unseen;

  std::size_t all_zero_cells() const;
};

/// Applies the fitted encoding: numeric cells are imputed then min-max
/// scaled into [0,1] (clamped; constant features map to 0), categoricals
/// are one-hot encoded. Row order is preserved.
FeatureMatrix transform(const LoanTable& table, const EncoderSpec& spec,
                        TransformReport* report = nullptr);

// Versioned text serialization with a bit-exact round trip.
std::string serialize_encoder(const EncoderSpec& spec);
EncoderSpec parse_encoder(std::string_view text);
void save_encoder(const std::string& path, const EncoderSpec& spec);
EncoderSpec load_encoder(const std::string& path);

}  // namespace arrkit
