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
#include <limits>

#include "arrkit/errors.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/parallel.hpp"

namespace arrkit::gbdt {

const char* to_string(LossKind kind) {
  return kind == LossKind::logistic ? "logistic" : "squared";
}

std::optional<LossKind> loss_from_string(const std::string& name) {
  if (name == "logistic") return LossKind::logistic;
  if (name == "squared") return LossKind::squared;
  return std::nullopt;
}

void GbdtConfig::validate() const {
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (num_leaves < 2) throw ConfigError("num_leaves must be >= 2");
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0)) {
    throw ConfigError("feature_fraction must be in (0, 1]");
  }
  if (!(bagging_fraction > 0.0 && bagging_fraction <= 1.0)) {
    throw ConfigError("bagging_fraction must be in (0, 1]");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (num_rounds < 1) throw ConfigError("num_rounds must be >= 1");
  if (early_stopping_rounds < 0) {
    throw ConfigError("early_stopping_rounds must be >= 0");
  }
  if (max_bins < 2 || max_bins > 256) throw ConfigError("max_bins must be in [2, 256]");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (lambda_l2 < 0.0) throw ConfigError("lambda_l2 must be >= 0");
}

std::pair<double, double> loss_grad_hess(LossKind kind, double raw, double target) {
  if (kind == LossKind::squared) return {raw - target, 1.0};
  double p = 1.0 / (1.0 + std::exp(-raw));
  return {p - target, p * (1.0 - p)};
}

double Tree::predict_row(const FeatureMatrix& matrix, std::size_t row) const {
  const TreeNode* node = &nodes[0];
  while (!node->is_leaf()) {
    double x = matrix.at(row, static_cast<std::size_t>(node->feature));
    node = &nodes[static_cast<std::size_t>(x <= node->threshold ? node->left
                                                                : node->right)];
  }
  return node->value;
}

int Tree::leaf_count() const {
  int count = 0;
  for (const auto& node : nodes) count += node.is_leaf() ? 1 : 0;
  return count;
}

int Tree::depth() const {
  // depth of node i, filled in node-creation order (parents before children)
  std::vector<int> depths(nodes.size(), 0);
  int max_depth = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) {
      max_depth = std::max(max_depth, depths[i]);
    } else {
      depths[static_cast<std::size_t>(nodes[i].left)] = depths[i] + 1;
      depths[static_cast<std::size_t>(nodes[i].right)] = depths[i] + 1;
    }
  }
  return max_depth;
}

namespace {

double leaf_output(const NodeStats& stats, const GbdtConfig& config) {
  return -stats.grad_sum / (stats.hess_sum + config.lambda_l2) *
         config.learning_rate;
}

class TreeBuilder {
 public:
  TreeBuilder(const BinnedMatrix& data, const BinMapper& mapper,
              std::span<const double> grads, std::span<const double> hessians,
              const GbdtConfig& config)
      : data_(data), mapper_(mapper), grads_(grads), hessians_(hessians),
        config_(config) {}

  Tree build(std::span<const std::uint32_t> rows, Rng& rng) {
    sample_features(rng);
    indices_.assign(rows.begin(), rows.end());
    scratch_.resize(indices_.size());

    Tree tree;
    tree.nodes.reserve(static_cast<std::size_t>(2 * config_.num_leaves));

    LeafState root;
    root.stats = compute_root_stats();
    root.node = new_leaf(tree, root.stats);
    root.begin = 0;
    root.count = indices_.size();
    root.depth = 0;
    attach_histogram(root);
    frontier_.clear();
    frontier_.push_back(std::move(root));

    int leaves = 1;
    while (leaves < config_.num_leaves) {
      // largest gain first; ties keep the earliest-created leaf
      std::size_t pick = frontier_.size();
      double best_gain = 0.0;
      for (std::size_t i = 0; i < frontier_.size(); ++i) {
        if (frontier_[i].best && frontier_[i].best->gain > best_gain) {
          best_gain = frontier_[i].best->gain;
          pick = i;
        }
      }
      if (pick == frontier_.size()) break;
      split_leaf(tree, pick);
      ++leaves;
    }
    frontier_.clear();
    return tree;
  }

 private:
  struct LeafState {
    int node = -1;
    std::size_t begin = 0;
    std::size_t count = 0;
    int depth = 0;
    NodeStats stats;
    LeafHistograms hist;
    bool has_hist = false;
    std::optional<SplitCandidate> best;
  };

  void sample_features(Rng& rng) {
    const std::size_t n_features = data_.features();
    auto k = static_cast<std::size_t>(std::llround(
        config_.feature_fraction * static_cast<double>(n_features)));
    k = std::clamp<std::size_t>(k, 1, n_features);
    active_features_.resize(n_features);
    for (std::size_t f = 0; f < n_features; ++f) {
      active_features_[f] = static_cast<int>(f);
    }
    if (k < n_features) {
      for (std::size_t i = 0; i < k; ++i) {  // partial Fisher-Yates
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n_features - i));
        std::swap(active_features_[i], active_features_[j]);
      }
      active_features_.resize(k);
      std::sort(active_features_.begin(), active_features_.end());
    }
  }

  NodeStats compute_root_stats() const {
    NodeStats stats;
    for (std::uint32_t idx : indices_) {
      stats.grad_sum += grads_[idx];
      stats.hess_sum += hessians_[idx];
    }
    stats.count = static_cast<double>(indices_.size());
    return stats;
  }

  int new_leaf(Tree& tree, const NodeStats& stats) {
    TreeNode node;
    node.value = leaf_output(stats, config_);
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size() - 1);
  }

  bool may_split(const LeafState& leaf) const {
    return leaf.depth < config_.max_depth &&
           leaf.count >= 2 * static_cast<std::size_t>(config_.min_samples_leaf);
  }

  void build_histogram(LeafState& leaf) {
    leaf.hist = LeafHistograms(mapper_);
    std::span<const std::uint32_t> rows(indices_.data() + leaf.begin, leaf.count);
    parallel::parallel_for(active_features_.size(),
                           [&](std::size_t begin, std::size_t end) {
                             for (std::size_t i = begin; i < end; ++i) {
                               auto f = static_cast<std::size_t>(active_features_[i]);
                               kernels::hist_accumulate(leaf.hist.feature_bins(f),
                                                        data_.column(f), grads_,
                                                        hessians_, rows);
                             }
                           });
    leaf.has_hist = true;
  }

  void attach_histogram(LeafState& leaf) {
    if (!may_split(leaf)) return;
    build_histogram(leaf);
    leaf.best = find_best_split(leaf.hist, leaf.stats, config_, active_features_,
                                mapper_);
  }

  // sibling = parent - child, reusing the parent's buffer
  void subtract_histogram(LeafState& sibling, LeafHistograms&& parent,
                          const LeafHistograms& child) {
    sibling.hist = std::move(parent);
    kernels::subtract(sibling.hist.all(), child.all(), sibling.hist.all());
    sibling.has_hist = true;
    sibling.best = find_best_split(sibling.hist, sibling.stats, config_,
                                   active_features_, mapper_);
  }

  void split_leaf(Tree& tree, std::size_t pick) {
    LeafState leaf = std::move(frontier_[pick]);
    frontier_.erase(frontier_.begin() + static_cast<std::ptrdiff_t>(pick));
    const SplitCandidate& split = *leaf.best;

    // stable partition of the leaf's index range by bin <= split.bin
    auto bins = data_.column(static_cast<std::size_t>(split.feature));
    std::size_t left_write = leaf.begin;
    std::size_t right_count = 0;
    for (std::size_t i = leaf.begin; i < leaf.begin + leaf.count; ++i) {
      std::uint32_t idx = indices_[i];
      if (bins[idx] <= split.bin) {
        indices_[left_write++] = idx;
      } else {
        scratch_[right_count++] = idx;
      }
    }
    std::copy(scratch_.begin(),
              scratch_.begin() + static_cast<std::ptrdiff_t>(right_count),
              indices_.begin() + static_cast<std::ptrdiff_t>(left_write));

    LeafState left, right;
    left.begin = leaf.begin;
    left.count = left_write - leaf.begin;
    right.begin = left_write;
    right.count = right_count;
    left.depth = right.depth = leaf.depth + 1;
    left.stats = split.left;
    right.stats = split.right;
    left.node = new_leaf(tree, left.stats);
    right.node = new_leaf(tree, right.stats);

    TreeNode& parent = tree.nodes[static_cast<std::size_t>(leaf.node)];
    parent.feature = split.feature;
    parent.bin = split.bin;
    parent.threshold = split.threshold;
    parent.left = left.node;
    parent.right = right.node;
    parent.value = 0.0;

    const bool left_splittable = may_split(left);
    const bool right_splittable = may_split(right);
    LeafState& small = left.count <= right.count ? left : right;
    LeafState& large = left.count <= right.count ? right : left;
    const bool small_splittable = &small == &left ? left_splittable : right_splittable;
    const bool large_splittable = &large == &left ? left_splittable : right_splittable;

    if (small_splittable) {
      build_histogram(small);
      small.best = find_best_split(small.hist, small.stats, config_,
                                   active_features_, mapper_);
      if (large_splittable) {
        subtract_histogram(large, std::move(leaf.hist), small.hist);
      }
    } else if (large_splittable) {
      build_histogram(large);
      large.best = find_best_split(large.hist, large.stats, config_,
                                   active_features_, mapper_);
    }

    frontier_.push_back(std::move(left));
    frontier_.push_back(std::move(right));
  }

  const BinnedMatrix& data_;
  const BinMapper& mapper_;
  std::span<const double> grads_;
  std::span<const double> hessians_;
  const GbdtConfig& config_;
  std::vector<std::uint32_t> indices_;
  std::vector<std::uint32_t> scratch_;
  std::vector<int> active_features_;
  std::vector<LeafState> frontier_;
};

double log_loss(std::span<const double> probabilities,
                std::span<const double> targets) {
  constexpr double kEps = 1e-12;
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    double p = std::clamp(probabilities[i], kEps, 1.0 - kEps);
    total += targets[i] > 0.5 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probabilities.size());
}

double validation_metric(LossKind loss, std::span<const double> raw,
                         std::span<const double> targets,
                         std::vector<double>& scratch) {
  if (loss == LossKind::squared) {
    return std::sqrt(kernels::sum_squared_diff(raw, targets) /
                     static_cast<double>(raw.size()));
  }
  scratch.resize(raw.size());
  kernels::sigmoid(raw, scratch);
  return log_loss(scratch, targets);
}

void add_tree_outputs(const Tree& tree, const FeatureMatrix& matrix,
                      std::vector<double>& raw) {
  parallel::parallel_for(matrix.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      raw[i] += tree.predict_row(matrix, i);
    }
  });
}

}  // namespace

Tree grow_tree(const BinnedMatrix& data, const BinMapper& mapper,
               std::span<const double> grads, std::span<const double> hessians,
               std::span<const std::uint32_t> rows, const GbdtConfig& config,
               Rng& rng) {
  if (grads.size() != hessians.size() || grads.size() != data.rows()) {
    throw InvalidArgumentError("grow_tree: gradient length mismatch");
  }
  if (rows.empty()) throw InvalidArgumentError("grow_tree: no rows");
  config.validate();
  return TreeBuilder(data, mapper, grads, hessians, config).build(rows, rng);
}

GbdtModel fit(const FeatureMatrix& matrix, std::span<const double> targets,
              LossKind loss_kind, const GbdtConfig& config,
              std::optional<ValidationData> valid) {
  config.validate();
  const std::size_t n = matrix.rows();
  if (n == 0 || matrix.columns() == 0) {
    throw InvalidArgumentError("fit: empty training matrix");
  }
  if (targets.size() != n) {
    throw InvalidArgumentError("fit: targets length does not match matrix rows");
  }
  if (loss_kind == LossKind::logistic) {
    for (double t : targets) {
      if (t != 0.0 && t != 1.0) {
        throw InvalidArgumentError("fit: logistic targets must be 0 or 1");
      }
    }
  }
  if (valid && (!valid->matrix || valid->matrix->rows() != valid->targets.size())) {
    throw InvalidArgumentError("fit: malformed validation data");
  }

  GbdtModel model;
  model.loss_kind = loss_kind;
  model.config = config;
  model.feature_names = matrix.column_names();
  model.bin_mapper = BinMapper::build(matrix, config.max_bins);
  const BinnedMatrix binned = BinnedMatrix::build(matrix, model.bin_mapper);

  const double mean_target = kernels::sum(targets) / static_cast<double>(n);
  if (loss_kind == LossKind::squared) {
    model.base_score = mean_target;
  } else {
    double p = std::clamp(mean_target, 1e-12, 1.0 - 1e-12);
    model.base_score = std::log(p / (1.0 - p));
  }

  std::vector<double> raw(n, model.base_score);
  std::vector<double> grads(n), hessians(n);
  std::vector<double> raw_valid;
  if (valid) raw_valid.assign(valid->matrix->rows(), model.base_score);
  std::vector<double> metric_scratch;

  // bagging state
  Rng rng(config.seed);
  std::vector<std::uint32_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
  const auto bag_size = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(config.bagging_fraction *
                                            static_cast<double>(n))),
      1, n);
  std::vector<std::uint32_t> bagged;

  double best_metric = std::numeric_limits<double>::infinity();
  int best_round = 0;
  int rounds_since_best = 0;

  for (int round = 0; round < config.num_rounds; ++round) {
    if (loss_kind == LossKind::squared) {
      kernels::squared_grad_hess(raw, targets, grads, hessians);
    } else {
      kernels::logistic_grad_hess(raw, targets, grads, hessians);
    }

    if (bag_size < n) {
      for (std::size_t i = 0; i < bag_size; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
        std::swap(pool[i], pool[j]);
      }
      bagged.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(bag_size));
      std::sort(bagged.begin(), bagged.end());
    } else if (bagged.size() != n) {
      bagged = pool;  // pool is still the identity permutation here
    }

    model.trees.push_back(TreeBuilder(binned, model.bin_mapper, grads, hessians,
                                      config)
                              .build(bagged, rng));
    const Tree& tree = model.trees.back();
    add_tree_outputs(tree, matrix, raw);

    if (valid) {
      add_tree_outputs(tree, *valid->matrix, raw_valid);
      double metric =
          validation_metric(loss_kind, raw_valid, valid->targets, metric_scratch);
      if (metric < best_metric) {
        best_metric = metric;
        best_round = round + 1;
        rounds_since_best = 0;
      } else {
        ++rounds_since_best;
        if (config.early_stopping_rounds > 0 &&
            rounds_since_best >= config.early_stopping_rounds) {
          break;
        }
      }
    }
  }

  model.best_iteration = valid ? best_round : static_cast<int>(model.trees.size());
  return model;
}

std::vector<double> predict(const GbdtModel& model, const FeatureMatrix& matrix) {
  if (matrix.column_names() != model.feature_names) {
    throw SchemaError("predict: matrix columns do not match the model's features");
  }
  std::vector<double> raw(matrix.rows(), model.base_score);
  const auto used = static_cast<std::size_t>(model.best_iteration);
  parallel::parallel_for(matrix.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t t = 0; t < used; ++t) {
        raw[i] += model.trees[t].predict_row(matrix, i);
      }
    }
  });
  if (model.loss_kind == LossKind::logistic) {
    kernels::sigmoid(raw, raw);
  }
  return raw;
}

std::vector<std::size_t> GbdtModel::feature_split_counts() const {
  std::vector<std::size_t> counts(feature_names.size(), 0);
  const auto used = static_cast<std::size_t>(best_iteration);
  for (std::size_t t = 0; t < used && t < trees.size(); ++t) {
    for (const auto& node : trees[t].nodes) {
      if (!node.is_leaf()) counts[static_cast<std::size_t>(node.feature)]++;
    }
  }
  return counts;
}

}  // namespace arrkit::gbdt
