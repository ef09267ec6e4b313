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

// arrkit command line: synth / train / evaluate.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 schema or data
// error, 4 I/O error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arrkit/config.hpp"
#include "arrkit/csv.hpp"
#include "arrkit/dataset.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/evaluation.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/manifest.hpp"
#include "arrkit/parallel.hpp"
#include "arrkit/pipeline.hpp"
#include "arrkit/version.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::string config_path;
  int threads = 0;  // 0 keeps the ARRKIT_THREADS / default value
  std::string kernel_backend = "auto";
};

void add_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path,
                  "key = value configuration file");
  cmd->add_option("--threads", options.threads,
                  "worker threads (default: ARRKIT_THREADS or 1)");
  cmd->add_option("--kernel-backend", options.kernel_backend,
                  "auto | scalar | avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

arrkit::KeyValueConfig load_config(const CommonOptions& options) {
  if (options.config_path.empty()) return {};
  return arrkit::KeyValueConfig::load(options.config_path);
}

void apply_common(const CommonOptions& options) {
  if (options.threads > 0) arrkit::parallel::set_thread_count(options.threads);
  if (options.kernel_backend == "scalar") {
    arrkit::kernels::force_backend(arrkit::kernels::Backend::scalar);
  } else if (options.kernel_backend == "avx2") {
    arrkit::kernels::force_backend(arrkit::kernels::Backend::avx2);
  }
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw arrkit::IoError("cannot create output directory: " + out_dir);
}

arrkit::RunManifest base_manifest(const std::string& command,
                                  const arrkit::KeyValueConfig& config) {
  arrkit::RunManifest manifest;
  manifest.command = command;
  manifest.toolkit_version = arrkit::kVersion;
  manifest.config_hash =
      arrkit::hash_hex(arrkit::fnv1a64(config.canonical_text()));
  manifest.kernel_backend =
      arrkit::kernels::backend_name(arrkit::kernels::active_backend());
  manifest.threads = arrkit::parallel::thread_count();
  manifest.timestamp_utc = arrkit::utc_timestamp_now();
  return manifest;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

arrkit::LoadResult load_loans(const std::string& path, const arrkit::ArrCap& cap) {
  auto result = arrkit::load_csv(path, arrkit::ColumnMap::defaults(), cap);
  if (result.table.empty()) {
    throw arrkit::DataError("no usable loans in " + path);
  }
  return result;
}

void report_load(const arrkit::LoadResult& result, const std::string& out_dir) {
  if (!result.report.rejects.empty()) {
    std::ofstream out(fs::path(out_dir) / "rejects.csv", std::ios::binary);
    if (!out) throw arrkit::IoError("cannot write rejects.csv");
    arrkit::write_rejects_csv(out, result.report.rejects);
    std::cerr << "warning: rejected " << result.report.rejects.size()
              << " malformed rows (see rejects.csv)\n";
  }
  if (result.report.dropped_intermediate > 0) {
    std::cout << "dropped " << result.report.dropped_intermediate
              << " intermediate loans\n";
  }
}

// ---- synth ------------------------------------------------------------------

int run_synth(std::size_t n, std::uint64_t seed, const std::string& out_dir,
              const CommonOptions& common) {
  auto started = Clock::now();
  auto config = load_config(common);
  apply_common(common);
  arrkit::ArrCap cap = arrkit::arr_cap_from(config);
  config.ensure_fully_consumed();

  arrkit::SynthConfig synth_config;
  synth_config.arr_cap = cap;
  arrkit::LoanTable table = arrkit::generate_synthetic(n, seed, synth_config);

  ensure_out_dir(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "loans.csv", std::ios::binary);
    if (!out) throw arrkit::IoError("cannot write loans.csv in " + out_dir);
    arrkit::write_table_csv(out, table);
    if (!out) throw arrkit::IoError("error writing loans.csv");
  }

  auto manifest = base_manifest("synth", config);
  manifest.seeds = {{"generator", seed}};
  manifest.row_counts = {{"generated", table.size()}};
  manifest.elapsed_seconds = seconds_since(started);
  arrkit::write_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);

  std::cout << "wrote " << table.size() << " loans to " << out_dir
            << "/loans.csv\n";
  return 0;
}

// ---- train ------------------------------------------------------------------

int run_train(const std::string& data_path, const std::string& mode_flag,
              const std::string& out_dir, const CommonOptions& common) {
  auto started = Clock::now();
  auto config = load_config(common);
  apply_common(common);
  arrkit::ArrCap cap = arrkit::arr_cap_from(config);
  arrkit::PipelineConfig pipeline_config = arrkit::pipeline_config_from(config);
  config.ensure_fully_consumed();
  if (!mode_flag.empty()) {
    auto mode = arrkit::pipeline_mode_from_string(mode_flag);
    if (!mode) throw arrkit::ConfigError("unknown mode: " + mode_flag);
    pipeline_config.mode = *mode;
  }

  auto loaded = load_loans(data_path, cap);
  ensure_out_dir(out_dir);
  report_load(loaded, out_dir);

  // Sparsity pruning looks at the full table, before the split.
  std::vector<std::string> retained = arrkit::prune_sparse_features(
      loaded.table, pipeline_config.prune_max_missing);
  auto [train, test] = arrkit::split(loaded.table, pipeline_config.split);

  arrkit::FittedPipeline pipeline =
      pipeline_config.mode == arrkit::PipelineMode::two_stage
          ? arrkit::fit_two_stage(train, pipeline_config, retained)
          : arrkit::fit_one_stage(train, pipeline_config, retained);

  arrkit::save_pipeline(out_dir, pipeline);
  {
    std::ofstream out(fs::path(out_dir) / "test.csv", std::ios::binary);
    if (!out) throw arrkit::IoError("cannot write test.csv");
    arrkit::write_table_csv(out, test);
  }

  auto scores = arrkit::score(pipeline, test);
  std::vector<double> predicted, realized;
  predicted.reserve(scores.size());
  realized.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predicted.push_back(scores[i].arr_hat);
    realized.push_back(test.outcomes[i].arr);
  }
  double test_rmse = arrkit::rmse(predicted, realized);

  auto manifest = base_manifest("train", config);
  manifest.seeds = {{"pipeline", pipeline_config.seed},
                    {"split", pipeline_config.split.seed},
                    {"stage1", pipeline_config.stage1.seed},
                    {"stage2", pipeline_config.stage2.seed}};
  manifest.inputs = {{"data", data_path}};
  manifest.row_counts = {{"loaded", loaded.table.size()},
                         {"rejected", loaded.report.rejects.size()},
                         {"dropped_intermediate",
                          loaded.report.dropped_intermediate},
                         {"train", train.size()},
                         {"test", test.size()}};
  manifest.elapsed_seconds = seconds_since(started);
  arrkit::write_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);

  std::cout << "mode: " << arrkit::to_string(pipeline.config.mode) << '\n';
  std::cout << "train rows: " << train.size() << ", test rows: " << test.size()
            << '\n';
  std::cout << "test rmse: " << test_rmse << '\n';
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

int run_evaluate(const std::string& pipeline_a, const std::string& pipeline_b,
                 const std::string& data_path, std::size_t k_max,
                 const std::string& out_dir, const CommonOptions& common) {
  auto started = Clock::now();
  auto config = load_config(common);
  apply_common(common);
  arrkit::ArrCap cap = arrkit::arr_cap_from(config);
  config.ensure_fully_consumed();

  auto loaded = load_loans(data_path, cap);
  if (k_max < 1 || k_max > loaded.table.size()) {
    throw arrkit::InvalidArgumentError(
        "k_max must be between 1 and the number of scored loans (" +
        std::to_string(loaded.table.size()) + ")");
  }
  ensure_out_dir(out_dir);
  report_load(loaded, out_dir);

  struct ModelRun {
    std::string label;
    std::string dir;
    std::vector<arrkit::ScoredLoan> scores;
    arrkit::EvaluationReport report;
  };
  std::vector<ModelRun> runs;
  runs.push_back({"a", pipeline_a, {}, {}});
  if (!pipeline_b.empty()) runs.push_back({"b", pipeline_b, {}, {}});

  for (auto& run : runs) {
    arrkit::FittedPipeline pipeline = arrkit::load_pipeline(run.dir);
    run.scores = arrkit::score(pipeline, loaded.table);
    run.report = arrkit::evaluate(run.scores, loaded.table, k_max);
    std::ofstream out(fs::path(out_dir) / ("scores_" + run.label + ".csv"),
                      std::ios::binary);
    if (!out) throw arrkit::IoError("cannot write scores CSV");
    arrkit::write_scores_csv(out, run.scores);
  }

  std::vector<arrkit::NamedReport> named;
  for (const auto& run : runs) named.push_back({run.label, &run.report});

  {
    std::ofstream out(fs::path(out_dir) / "topk_curve.csv", std::ios::binary);
    arrkit::write_topk_curve_csv(out, named);
  }
  {
    std::ofstream out(fs::path(out_dir) / "grade_table.csv", std::ios::binary);
    arrkit::write_grade_table_csv(out, named);
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.csv", std::ios::binary);
    arrkit::write_summary_csv(out, named);
  }
  {
    std::ofstream out(fs::path(out_dir) / "cross_table.csv", std::ios::binary);
    arrkit::write_cross_table_csv(out, runs[0].report);
  }

  auto manifest = base_manifest("evaluate", config);
  manifest.inputs = {{"data", data_path}, {"pipeline_a", pipeline_a}};
  if (!pipeline_b.empty()) manifest.inputs.push_back({"pipeline_b", pipeline_b});
  manifest.row_counts = {{"scored", loaded.table.size()}, {"k_max", k_max}};
  manifest.elapsed_seconds = seconds_since(started);
  arrkit::write_manifest((fs::path(out_dir) / "manifest.json").string(), manifest);

  for (const auto& run : runs) {
    std::cout << "model " << run.label << ": top-" << k_max << " mean ARR "
              << run.report.top_average_arr << ", default rate "
              << run.report.top_default_rate << ", rmse " << run.report.rmse
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrkit: loan profit scoring with one- and two-stage boosted trees"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(arrkit::kVersion));

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic loan CSV");
  std::size_t synth_n = 0;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  CommonOptions synth_common;
  synth->add_option("--n", synth_n, "number of loans")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "generator seed")->required();
  synth->add_option("--out", synth_out, "output directory")->required();
  add_common(synth, synth_common);

  // train
  auto* train = app.add_subcommand("train", "fit a pipeline on a loan CSV");
  std::string train_data, train_mode, train_out;
  CommonOptions train_common;
  train->add_option("--data", train_data, "input loan CSV")->required();
  train->add_option("--mode", train_mode, "one_stage | two_stage")
      ->check(CLI::IsMember({"one_stage", "two_stage"}));
  train->add_option("--out", train_out, "output directory")->required();
  add_common(train, train_common);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score data and emit reports");
  std::string eval_pipeline_a, eval_pipeline_b, eval_data, eval_out;
  std::size_t eval_kmax = 50;
  CommonOptions eval_common;
  evaluate->add_option("--pipeline", eval_pipeline_a, "pipeline directory")
      ->required();
  evaluate->add_option("--pipeline-b", eval_pipeline_b,
                       "second pipeline directory for side-by-side reports");
  evaluate->add_option("--data", eval_data, "held-out loan CSV")->required();
  evaluate->add_option("--k-max", eval_kmax, "top-k depth of the curve");
  evaluate->add_option("--out", eval_out, "output directory")->required();
  add_common(evaluate, eval_common);

  try {
    app.parse(argc, argv);
    if (synth->parsed()) return run_synth(synth_n, synth_seed, synth_out, synth_common);
    if (train->parsed()) return run_train(train_data, train_mode, train_out, train_common);
    return run_evaluate(eval_pipeline_a, eval_pipeline_b, eval_data, eval_kmax,
                        eval_out, eval_common);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const arrkit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const arrkit::InvalidArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const arrkit::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitData;
  } catch (const arrkit::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const arrkit::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
