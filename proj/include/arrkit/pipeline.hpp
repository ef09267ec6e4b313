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

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arrkit/dataset.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/preprocess.hpp"

namespace arrkit {

// The two model layouts under comparison: profit scoring alone, and credit
// scoring feeding profit scoring. In the two-stage layout a classifier
// first predicts each loan's probability of default; that prediction is
// appended as one extra regressor feature.

enum class PipelineMode { one_stage, two_stage };

const char* to_string(PipelineMode mode);
std::optional<PipelineMode> pipeline_mode_from_string(const std::string& name);

struct PipelineConfig {
  gbdt::GbdtConfig stage1;  // PD classifier (logistic loss)
  gbdt::GbdtConfig stage2;  // ARR regressor (squared loss)
  std::string pd_feature_name = "pd_hat";
  /// Out-of-fold PD construction for the stage-2 training matrix; values
  /// <= 1 mean in-sample PDs from the full stage-1 model (leaky, kept as
  /// an explicit mode).
  int cross_fit_folds = 5;
  SplitSpec split;  // train/test split applied by the train command
  PipelineMode mode = PipelineMode::two_stage;
  double prune_max_missing = 0.7;
  /// Fraction of the training table carved off for early stopping; 0
  /// trains on everything with no validation tracking.
  double validation_fraction = 0.2;
  EncoderOptions encoder;
  std::uint64_t seed = 0;  // validation carve and fold assignment

  void validate() const;
};

struct FittedPipeline {
  EncoderSpec encoder;
  std::optional<gbdt::GbdtModel> stage1_model;  // present iff two_stage
  gbdt::GbdtModel stage2_model;
  PipelineConfig config;
};

struct ScoredLoan {
  std::uint64_t loan_id = 0;
  std::optional<double> pd_hat;  // absent for one-stage pipelines
  double arr_hat = 0.0;
};

/// Profit scoring alone: encoder fit on train, regressor on (features ->
/// ARR). retained_features may be empty, in which case they are derived
/// from the training table's missingness.
FittedPipeline fit_one_stage(const LoanTable& train, const PipelineConfig& config,
                             std::span<const std::string> retained_features = {});

/// Credit-into-profit scoring: stage-1 classifier on (features ->
/// loan_status); each training row's PD comes from a fold model not
/// trained on that row (unless cross_fit_folds <= 1); a full stage-1 model
/// is kept for scoring; stage-2 regressor on (features + PD -> ARR).
/// Throws DataError when train has a single loan_status class.
FittedPipeline fit_two_stage(const LoanTable& train, const PipelineConfig& config,
                             std::span<const std::string> retained_features = {});

/// Scores every loan of the table with the fitted pipeline.
std::vector<ScoredLoan> score(const FittedPipeline& pipeline,
                              const LoanTable& table);

/// Deterministic balanced fold labels in [0, folds); the assignment
/// fit_two_stage uses, exposed so the out-of-fold property is verifiable.
std::vector<int> crossfit_fold_assignment(std::size_t n, int folds,
                                          std::uint64_t seed);

// ---- persistence ------------------------------------------------------------

/// Writes encoder.txt, stage2.model, pipeline.txt (and stage1.model for
/// two-stage pipelines) into an existing directory.
void save_pipeline(const std::string& dir, const FittedPipeline& pipeline);
FittedPipeline load_pipeline(const std::string& dir);

/// Score CSV: loan_id, pd_hat, arr_hat (pd_hat empty for one-stage).
void write_scores_csv(std::ostream& out, std::span<const ScoredLoan> scores);

}  // namespace arrkit
