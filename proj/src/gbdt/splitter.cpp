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

#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <vector>

#include "arrkit/errors.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/parallel.hpp"

namespace arrkit::gbdt {

LeafHistograms::LeafHistograms(const BinMapper& mapper) {
  offsets_.reserve(mapper.feature_count() + 1);
  std::size_t offset = 0;
  for (std::size_t f = 0; f < mapper.feature_count(); ++f) {
    offsets_.push_back(offset);
    offset += mapper.bin_count(f) * 3;
  }
  offsets_.push_back(offset);
  data_.assign(offset, 0.0);
}

std::span<double> LeafHistograms::feature_bins(std::size_t feature) {
  return {data_.data() + offsets_[feature],
          offsets_[feature + 1] - offsets_[feature]};
}

std::span<const double> LeafHistograms::feature_bins(std::size_t feature) const {
  return {data_.data() + offsets_[feature],
          offsets_[feature + 1] - offsets_[feature]};
}

void LeafHistograms::clear() { std::fill(data_.begin(), data_.end(), 0.0); }

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Best candidate within one feature, or gain = -inf when none qualifies.
SplitCandidate scan_feature(std::span<const double> hist, int feature,
                            const NodeStats& parent, const GbdtConfig& config,
                            const BinMapper& mapper) {
  const std::size_t n_bins = hist.size() / 3;
  SplitCandidate best;
  best.feature = feature;
  best.gain = kNegInf;
  if (n_bins < 2) return best;
  const std::size_t n_candidates = n_bins - 1;

  // prefix sums over bins: stats of the would-be left child
  std::vector<double> left_grad(n_candidates);
  std::vector<double> left_hess(n_candidates);
  std::vector<double> left_count(n_candidates);
  double g = 0.0, h = 0.0, c = 0.0;
  for (std::size_t b = 0; b < n_candidates; ++b) {
    g += hist[b * 3];
    h += hist[b * 3 + 1];
    c += hist[b * 3 + 2];
    left_grad[b] = g;
    left_hess[b] = h;
    left_count[b] = c;
  }
  const double total_g = g + hist[n_candidates * 3];
  const double total_h = h + hist[n_candidates * 3 + 1];
  const double total_c = c + hist[n_candidates * 3 + 2];

  if (total_c != parent.count ||
      std::abs(total_g - parent.grad_sum) >
          1e-6 * std::max(1.0, std::abs(parent.grad_sum)) ||
      std::abs(total_h - parent.hess_sum) >
          1e-6 * std::max(1.0, std::abs(parent.hess_sum))) {
    throw InternalError("histogram totals disagree with parent node stats");
  }

  const double parent_term =
      parent.grad_sum * parent.grad_sum / (parent.hess_sum + config.lambda_l2);
  std::vector<double> gains(n_candidates);
  kernels::split_gains(left_grad, left_hess, left_count, parent.grad_sum,
                       parent.hess_sum, parent.count, config.lambda_l2,
                       static_cast<double>(config.min_samples_leaf), parent_term,
                       gains);

  std::size_t best_bin = n_candidates;
  double best_gain = kNegInf;
  for (std::size_t b = 0; b < n_candidates; ++b) {
    if (gains[b] > best_gain) {  // strict: ties keep the lowest bin
      best_gain = gains[b];
      best_bin = b;
    }
  }
  if (best_bin == n_candidates) return best;

  best.bin = static_cast<int>(best_bin);
  best.gain = best_gain;
  best.threshold = mapper.threshold_value(static_cast<std::size_t>(feature),
                                          best.bin);
  best.left = {left_grad[best_bin], left_hess[best_bin], left_count[best_bin]};
  best.right = {parent.grad_sum - left_grad[best_bin],
                parent.hess_sum - left_hess[best_bin],
                parent.count - left_count[best_bin]};
  return best;
}

}  // namespace

std::optional<SplitCandidate> find_best_split(
    const LeafHistograms& histograms, const NodeStats& parent_stats,
    const GbdtConfig& config, std::span<const int> active_features,
    const BinMapper& mapper) {
  std::vector<SplitCandidate> per_feature(active_features.size());
  std::exception_ptr error;
  std::mutex error_mutex;
  parallel::parallel_for(active_features.size(), [&](std::size_t begin,
                                                     std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        int feature = active_features[i];
        per_feature[i] =
            scan_feature(histograms.feature_bins(static_cast<std::size_t>(feature)),
                         feature, parent_stats, config, mapper);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();  // surfaced after the join
      }
    }
  });
  if (error) std::rethrow_exception(error);

  // Reduce in fixed order: lowest feature index wins ties no matter how
  // the scans were scheduled.
  const SplitCandidate* best = nullptr;
  for (const auto& candidate : per_feature) {
    if (candidate.gain == kNegInf) continue;
    if (!best || candidate.gain > best->gain) best = &candidate;
  }
  if (!best || !(best->gain > 0.0)) return std::nullopt;
  return *best;
}

}  // namespace arrkit::gbdt
