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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arrkit/feature_matrix.hpp"
#include "arrkit/rng.hpp"

namespace arrkit::gbdt {

// Histogram-based gradient boosting with leaf-wise tree growth; the same
// engine drives the stage-1 classifier (logistic loss) and the stage-2
// regressor (squared loss). Training is deterministic for a fixed seed
// regardless of the worker thread count: histograms are built per feature
// and candidates are reduced in fixed feature order.

enum class LossKind { logistic, squared };

const char* to_string(LossKind kind);
std::optional<LossKind> loss_from_string(const std::string& name);

struct GbdtConfig {
  int max_depth = 6;
  int num_leaves = 10;
  double feature_fraction = 0.8;
  double bagging_fraction = 0.5;
  double learning_rate = 0.01;
  int num_rounds = 500;
  int early_stopping_rounds = 50;  // 0 disables early stopping
  int max_bins = 255;
  int min_samples_leaf = 20;
  double lambda_l2 = 1.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Per-feature discretization: sorted thresholds that are the upper value
/// bound of each bin but the last; bin(x) = number of thresholds < x.
class BinMapper {
 public:
  BinMapper() = default;

  /// Thresholds at approximate value quantiles. Features with at most
  /// max_bins distinct values are binned exactly (one bin per value).
  static BinMapper build(const FeatureMatrix& matrix, int max_bins);

  std::size_t feature_count() const { return thresholds_.size(); }
  std::size_t bin_count(std::size_t feature) const {
    return thresholds_[feature].size() + 1;
  }
  std::size_t total_bins() const;

  int bin_index(std::size_t feature, double value) const;
  double threshold_value(std::size_t feature, int bin) const {
    return thresholds_[feature][static_cast<std::size_t>(bin)];
  }
  std::span<const double> thresholds(std::size_t feature) const {
    return thresholds_[feature];
  }

  void set_thresholds(std::vector<std::vector<double>> thresholds) {
    thresholds_ = std::move(thresholds);
  }

 private:
  std::vector<std::vector<double>> thresholds_;
};

/// Column-wise uint8 bin indices for fast histogram accumulation.
class BinnedMatrix {
 public:
  static BinnedMatrix build(const FeatureMatrix& matrix, const BinMapper& mapper);

  std::size_t rows() const { return rows_; }
  std::size_t features() const { return columns_.size(); }
  std::span<const std::uint8_t> column(std::size_t feature) const {
    return columns_[feature];
  }

 private:
  std::size_t rows_ = 0;
  std::vector<std::vector<std::uint8_t>> columns_;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  int bin = -1;      // left child takes bins <= bin
  double threshold = 0.0;  // raw-value equivalent: left takes value <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output (learning rate already applied)

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at index 0

  double predict_row(const FeatureMatrix& matrix, std::size_t row) const;
  int leaf_count() const;
  int depth() const;
};

struct NodeStats {
  double grad_sum = 0.0;
  double hess_sum = 0.0;
  double count = 0.0;
};

struct SplitCandidate {
  int feature = -1;
  int bin = -1;
  double gain = 0.0;
  double threshold = 0.0;
  NodeStats left;
  NodeStats right;
};

/// Histograms of one leaf, one flat (grad, hess, count) triple per bin,
/// features laid out back to back.
class LeafHistograms {
 public:
  LeafHistograms() = default;
  explicit LeafHistograms(const BinMapper& mapper);

  std::span<double> feature_bins(std::size_t feature);
  std::span<const double> feature_bins(std::size_t feature) const;
  std::span<double> all() { return data_; }
  std::span<const double> all() const { return data_; }
  void clear();

 private:
  std::vector<std::size_t> offsets_;  // triple offsets per feature
  std::vector<double> data_;
};

/// Pointwise loss derivatives; logistic expects target in {0,1}.
/// squared: grad = raw - target, hess = 1.
/// logistic: p = sigmoid(raw), grad = p - target, hess = p(1-p).
std::pair<double, double> loss_grad_hess(LossKind kind, double raw, double target);

/// Best second-order split over the given features:
///   gain = GL^2/(HL+l2) + GR^2/(HR+l2) - GP^2/(HP+l2)
/// maximized over (feature, bin) subject to min_samples_leaf on both
/// children; ties go to the lowest feature then lowest bin. Returns
/// nullopt when no split has positive gain. Throws InternalError when a
/// feature histogram disagrees with parent_stats.
std::optional<SplitCandidate> find_best_split(
    const LeafHistograms& histograms, const NodeStats& parent_stats,
    const GbdtConfig& config, std::span<const int> active_features,
    const BinMapper& mapper);

/// Grows one tree leaf-wise (largest-gain leaf first) until num_leaves,
/// max_depth, or no positive gain. Leaf value = -G/(H+l2) * learning_rate.
/// feature_fraction is sampled from rng; rows is the bagged subset.
Tree grow_tree(const BinnedMatrix& data, const BinMapper& mapper,
               std::span<const double> grads, std::span<const double> hessians,
               std::span<const std::uint32_t> rows, const GbdtConfig& config,
               Rng& rng);

struct GbdtModel {
  LossKind loss_kind = LossKind::squared;
  double base_score = 0.0;
  std::vector<Tree> trees;
  GbdtConfig config;
  BinMapper bin_mapper;
  int best_iteration = 0;  // number of trees used by predict
  std::vector<std::string> feature_names;

  /// Split-count feature importance over the first best_iteration trees.
  std::vector<std::size_t> feature_split_counts() const;
};

struct ValidationData {
  const FeatureMatrix* matrix = nullptr;
  std::span<const double> targets;
};

/// Boosts num_rounds trees from the given matrix/targets. When validation
/// data is supplied, tracks RMSE (squared) or log-loss (logistic) on it,
/// sets best_iteration to the argmin and stops early after
/// early_stopping_rounds rounds without improvement.
GbdtModel fit(const FeatureMatrix& matrix, std::span<const double> targets,
              LossKind loss_kind, const GbdtConfig& config,
              std::optional<ValidationData> valid = std::nullopt);

/// Sum of tree outputs over trees[0..best_iteration) plus base_score;
/// logistic models return sigmoid of that. Throws SchemaError when the
/// matrix columns do not match the model's feature names.
std::vector<double> predict(const GbdtModel& model, const FeatureMatrix& matrix);

// Versioned text serialization, bit-exact round trip (pre-order node dump).
std::string serialize_model(const GbdtModel& model);
GbdtModel parse_model(std::string_view text);
void save_model(const std::string& path, const GbdtModel& model);
GbdtModel load_model(const std::string& path);

}  // namespace arrkit::gbdt
