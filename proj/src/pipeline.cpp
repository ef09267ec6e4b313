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

#include "arrkit/pipeline.hpp"

#include <algorithm>

#include "arrkit/errors.hpp"
#include "arrkit/rng.hpp"

namespace arrkit {

namespace {

constexpr std::uint64_t kValidationSalt = 0x76616c6964;  // "valid"
constexpr std::uint64_t kFoldSalt = 0x666f6c64;          // "fold"

std::vector<double> arr_targets(const LoanTable& table) {
  std::vector<double> targets;
  targets.reserve(table.size());
  for (const auto& outcome : table.outcomes) targets.push_back(outcome.arr);
  return targets;
}

std::vector<double> status_targets(const LoanTable& table) {
  std::vector<double> targets;
  targets.reserve(table.size());
  for (const auto& outcome : table.outcomes) {
    targets.push_back(static_cast<double>(outcome.loan_status));
  }
  return targets;
}

std::vector<double> take_values(std::span<const double> values,
                                std::span<const std::uint32_t> rows) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::uint32_t r : rows) out.push_back(values[r]);
  return out;
}

// Everything both pipeline layouts share: retained features, the fitted
// encoder, the encoded matrix, targets, and the early-stopping carve.
struct FitPlan {
  EncoderSpec encoder;
  FeatureMatrix fit_matrix;
  FeatureMatrix valid_matrix;  // empty when no carve
  std::vector<double> fit_arr, valid_arr;
  std::vector<double> fit_status, valid_status;
  bool has_valid = false;

  std::optional<gbdt::ValidationData> validation(
      std::span<const double> targets) const {
    if (!has_valid) return std::nullopt;
    return gbdt::ValidationData{&valid_matrix, targets};
  }
};

FitPlan prepare(const LoanTable& train, const PipelineConfig& config,
                std::span<const std::string> retained_features) {
  if (train.empty()) throw InvalidArgumentError("pipeline fit: empty training table");
  config.validate();

  std::vector<std::string> retained(retained_features.begin(),
                                    retained_features.end());
  if (retained.empty()) {
    retained = prune_sparse_features(train, config.prune_max_missing);
  }

  FitPlan plan;
  plan.encoder = fit_encoder(train, retained, config.encoder);
  FeatureMatrix all = transform(train, plan.encoder);

  std::vector<double> all_arr = arr_targets(train);
  std::vector<double> all_status = status_targets(train);

  const std::size_t n = train.size();
  auto carve = static_cast<std::size_t>(config.validation_fraction *
                                        static_cast<double>(n));
  bool want_valid = config.validation_fraction > 0.0 && carve >= 1 && n - carve >= 2;
  if (!want_valid) {
    plan.fit_matrix = std::move(all);
    plan.fit_arr = std::move(all_arr);
    plan.fit_status = std::move(all_status);
    return plan;
  }

  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng(mix_seed(config.seed, kValidationSalt));
  rng.shuffle(std::span<std::uint32_t>(order));
  std::vector<std::uint32_t> valid_rows(
      order.begin(), order.begin() + static_cast<std::ptrdiff_t>(carve));
  std::vector<std::uint32_t> fit_rows(
      order.begin() + static_cast<std::ptrdiff_t>(carve), order.end());
  std::sort(valid_rows.begin(), valid_rows.end());
  std::sort(fit_rows.begin(), fit_rows.end());

  plan.fit_matrix = all.take_rows(fit_rows);
  plan.valid_matrix = all.take_rows(valid_rows);
  plan.fit_arr = take_values(all_arr, fit_rows);
  plan.valid_arr = take_values(all_arr, valid_rows);
  plan.fit_status = take_values(all_status, fit_rows);
  plan.valid_status = take_values(all_status, valid_rows);
  plan.has_valid = true;
  return plan;
}

}  // namespace

const char* to_string(PipelineMode mode) {
  return mode == PipelineMode::one_stage ? "one_stage" : "two_stage";
}

std::optional<PipelineMode> pipeline_mode_from_string(const std::string& name) {
  if (name == "one_stage") return PipelineMode::one_stage;
  if (name == "two_stage") return PipelineMode::two_stage;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  stage1.validate();
  stage2.validate();
  if (pd_feature_name.empty()) throw ConfigError("pd_feature_name must not be empty");
  if (cross_fit_folds > 1000) throw ConfigError("cross_fit_folds is implausibly large");
  if (!(prune_max_missing >= 0.0 && prune_max_missing <= 1.0)) {
    throw ConfigError("prune_max_missing must be in [0, 1]");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must be in [0, 1)");
  }
  if (!(split.train_fraction > 0.0 && split.train_fraction < 1.0)) {
    throw ConfigError("split.train_fraction must be in (0, 1)");
  }
}

std::vector<int> crossfit_fold_assignment(std::size_t n, int folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw InvalidArgumentError("crossfit_fold_assignment: folds < 2");
  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng(mix_seed(seed, kFoldSalt));
  rng.shuffle(std::span<std::uint32_t>(order));
  std::vector<int> assignment(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    assignment[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return assignment;
}

FittedPipeline fit_one_stage(const LoanTable& train, const PipelineConfig& config,
                             std::span<const std::string> retained_features) {
  FitPlan plan = prepare(train, config, retained_features);
  FittedPipeline pipeline;
  pipeline.config = config;
  pipeline.config.mode = PipelineMode::one_stage;
  pipeline.encoder = std::move(plan.encoder);
  pipeline.stage2_model =
      gbdt::fit(plan.fit_matrix, plan.fit_arr, gbdt::LossKind::squared,
                config.stage2, plan.validation(plan.valid_arr));
  return pipeline;
}

FittedPipeline fit_two_stage(const LoanTable& train, const PipelineConfig& config,
                             std::span<const std::string> retained_features) {
  FitPlan plan = prepare(train, config, retained_features);

  bool has_paid = false, has_default = false;
  for (double s : plan.fit_status) (s > 0.5 ? has_default : has_paid) = true;
  if (!has_paid || !has_default) {
    throw DataError("fit_two_stage: training data has a single loan_status class");
  }

  for (const auto& column : plan.fit_matrix.column_names()) {
    if (column == config.pd_feature_name) {
      throw ConfigError("pd_feature_name '" + config.pd_feature_name +
                        "' collides with an encoded column");
    }
  }

  FittedPipeline pipeline;
  pipeline.config = config;
  pipeline.config.mode = PipelineMode::two_stage;
  pipeline.encoder = std::move(plan.encoder);

  // Full stage-1 model: scores new data, and supplies in-sample PDs when
  // cross-fitting is disabled.
  pipeline.stage1_model =
      gbdt::fit(plan.fit_matrix, plan.fit_status, gbdt::LossKind::logistic,
                config.stage1, plan.validation(plan.valid_status));

  const std::size_t n_fit = plan.fit_matrix.rows();
  std::vector<double> pd_train(n_fit, 0.0);
  if (config.cross_fit_folds <= 1) {
    pd_train = gbdt::predict(*pipeline.stage1_model, plan.fit_matrix);
  } else {
    std::vector<int> fold_of =
        crossfit_fold_assignment(n_fit, config.cross_fit_folds, config.seed);
    for (int fold = 0; fold < config.cross_fit_folds; ++fold) {
      std::vector<std::uint32_t> in_rows, out_rows;
      for (std::size_t i = 0; i < n_fit; ++i) {
        (fold_of[i] == fold ? out_rows : in_rows)
            .push_back(static_cast<std::uint32_t>(i));
      }
      if (out_rows.empty()) continue;
      if (in_rows.empty()) {
        throw DataError("fit_two_stage: a cross-fit fold would train on nothing");
      }
      gbdt::GbdtConfig fold_config = config.stage1;
      fold_config.seed =
          mix_seed(config.stage1.seed, static_cast<std::uint64_t>(fold) + 1);
      FeatureMatrix fold_matrix = plan.fit_matrix.take_rows(in_rows);
      std::vector<double> fold_status = take_values(plan.fit_status, in_rows);
      gbdt::GbdtModel fold_model =
          gbdt::fit(fold_matrix, fold_status, gbdt::LossKind::logistic, fold_config);
      FeatureMatrix held = plan.fit_matrix.take_rows(out_rows);
      std::vector<double> held_pd = gbdt::predict(fold_model, held);
      for (std::size_t i = 0; i < out_rows.size(); ++i) {
        pd_train[out_rows[i]] = held_pd[i];
      }
    }
  }

  FeatureMatrix stage2_matrix = std::move(plan.fit_matrix);
  stage2_matrix.append_column(config.pd_feature_name, pd_train);

  std::optional<gbdt::ValidationData> stage2_valid;
  FeatureMatrix stage2_valid_matrix;
  if (plan.has_valid) {
    std::vector<double> pd_valid =
        gbdt::predict(*pipeline.stage1_model, plan.valid_matrix);
    stage2_valid_matrix = std::move(plan.valid_matrix);
    stage2_valid_matrix.append_column(config.pd_feature_name, pd_valid);
    stage2_valid = gbdt::ValidationData{&stage2_valid_matrix, plan.valid_arr};
  }

  pipeline.stage2_model = gbdt::fit(stage2_matrix, plan.fit_arr,
                                    gbdt::LossKind::squared, config.stage2,
                                    stage2_valid);
  return pipeline;
}

std::vector<ScoredLoan> score(const FittedPipeline& pipeline,
                              const LoanTable& table) {
  FeatureMatrix matrix = transform(table, pipeline.encoder);
  std::vector<ScoredLoan> scores(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    scores[i].loan_id = table.records[i].loan_id;
  }
  if (pipeline.config.mode == PipelineMode::two_stage) {
    if (!pipeline.stage1_model) {
      throw InternalError("two-stage pipeline without a stage-1 model");
    }
    std::vector<double> pd = gbdt::predict(*pipeline.stage1_model, matrix);
    matrix.append_column(pipeline.config.pd_feature_name, pd);
    std::vector<double> arr_hat = gbdt::predict(pipeline.stage2_model, matrix);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i].pd_hat = pd[i];
      scores[i].arr_hat = arr_hat[i];
    }
  } else {
    std::vector<double> arr_hat = gbdt::predict(pipeline.stage2_model, matrix);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      scores[i].arr_hat = arr_hat[i];
    }
  }
  return scores;
}

}  // namespace arrkit
