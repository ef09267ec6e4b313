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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "arrkit/csv.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/pipeline.hpp"
#include "arrkit/textio.hpp"

namespace arrkit {

namespace {

namespace fs = std::filesystem;

constexpr const char* kPipelineMagic = "arrkit_pipeline";
constexpr const char* kPipelineVersion = "v1";

[[noreturn]] void bad_pipeline(const std::string& why) {
  throw DataError("malformed pipeline.txt: " + why);
}

std::string pipeline_header_text(const FittedPipeline& pipeline) {
  const PipelineConfig& c = pipeline.config;
  std::ostringstream out;
  out << kPipelineMagic << ' ' << kPipelineVersion << '\n';
  out << "mode " << to_string(c.mode) << '\n';
  out << "pd_feature " << textio::encode_token(c.pd_feature_name) << '\n';
  out << "cross_fit_folds " << c.cross_fit_folds << '\n';
  out << "prune_max_missing " << textio::format_double_hex(c.prune_max_missing)
      << '\n';
  out << "validation_fraction "
      << textio::format_double_hex(c.validation_fraction) << '\n';
  out << "seed " << c.seed << '\n';
  out << "split " << textio::format_double_hex(c.split.train_fraction) << ' '
      << c.split.seed << '\n';
  out << "encoder_top_k " << c.encoder.top_k_categories << '\n';
  out << "encoder_high_cardinality " << c.encoder.high_cardinality.size();
  for (const auto& name : c.encoder.high_cardinality) {
    out << ' ' << textio::encode_token(name);
  }
  out << '\n';
  out << "end\n";
  return out.str();
}

void parse_pipeline_header(const std::string& text, PipelineConfig& config) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != std::string(kPipelineMagic) + " " + kPipelineVersion) {
    bad_pipeline("bad header");
  }
  while (std::getline(in, line)) {
    if (line == "end") return;
    std::istringstream fields(line);
    std::string key;
    fields >> key;
    auto next = [&]() -> std::string {
      std::string token;
      if (!(fields >> token)) bad_pipeline("missing value for " + key);
      return token;
    };
    auto next_int = [&]() -> long long {
      auto v = textio::parse_int(next());
      if (!v) bad_pipeline("bad integer for " + key);
      return *v;
    };
    auto next_hex = [&]() -> double {
      auto v = textio::parse_double_hex(next());
      if (!v) bad_pipeline("bad float for " + key);
      return *v;
    };
    if (key == "mode") {
      auto mode = pipeline_mode_from_string(next());
      if (!mode) bad_pipeline("unknown mode");
      config.mode = *mode;
    } else if (key == "pd_feature") {
      auto name = textio::decode_token(next());
      if (!name) bad_pipeline("bad pd_feature token");
      config.pd_feature_name = *name;
    } else if (key == "cross_fit_folds") {
      config.cross_fit_folds = static_cast<int>(next_int());
    } else if (key == "prune_max_missing") {
      config.prune_max_missing = next_hex();
    } else if (key == "validation_fraction") {
      config.validation_fraction = next_hex();
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(next_int());
    } else if (key == "split") {
      config.split.train_fraction = next_hex();
      config.split.seed = static_cast<std::uint64_t>(next_int());
    } else if (key == "encoder_top_k") {
      config.encoder.top_k_categories = static_cast<std::size_t>(next_int());
    } else if (key == "encoder_high_cardinality") {
      auto count = next_int();
      config.encoder.high_cardinality.clear();
      for (long long i = 0; i < count; ++i) {
        auto name = textio::decode_token(next());
        if (!name) bad_pipeline("bad high-cardinality token");
        config.encoder.high_cardinality.push_back(*name);
      }
    } else {
      bad_pipeline("unknown key '" + key + "'");
    }
  }
  bad_pipeline("missing end marker");
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("error writing " + path.string());
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void save_pipeline(const std::string& dir, const FittedPipeline& pipeline) {
  fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw IoError("cannot create pipeline directory: " + dir);

  write_text_file(base / "pipeline.txt", pipeline_header_text(pipeline));
  write_text_file(base / "encoder.txt", serialize_encoder(pipeline.encoder));
  write_text_file(base / "stage2.model",
                  gbdt::serialize_model(pipeline.stage2_model));
  if (pipeline.config.mode == PipelineMode::two_stage) {
    if (!pipeline.stage1_model) {
      throw InternalError("two-stage pipeline without a stage-1 model");
    }
    write_text_file(base / "stage1.model",
                    gbdt::serialize_model(*pipeline.stage1_model));
  }
}

FittedPipeline load_pipeline(const std::string& dir) {
  fs::path base(dir);
  FittedPipeline pipeline;
  parse_pipeline_header(read_text_file(base / "pipeline.txt"), pipeline.config);
  pipeline.encoder = parse_encoder(read_text_file(base / "encoder.txt"));
  pipeline.stage2_model = gbdt::parse_model(read_text_file(base / "stage2.model"));
  if (pipeline.config.mode == PipelineMode::two_stage) {
    pipeline.stage1_model =
        gbdt::parse_model(read_text_file(base / "stage1.model"));
    pipeline.config.stage1 = pipeline.stage1_model->config;
  }
  pipeline.config.stage2 = pipeline.stage2_model.config;
  return pipeline;
}

void write_scores_csv(std::ostream& out, std::span<const ScoredLoan> scores) {
  out << "loan_id,pd_hat,arr_hat\n";
  std::vector<std::string> fields(3);
  for (const auto& score : scores) {
    fields[0] = std::to_string(score.loan_id);
    fields[1] = score.pd_hat ? textio::format_double(*score.pd_hat) : std::string{};
    fields[2] = textio::format_double(score.arr_hat);
    csv::write_row(out, fields);
  }
}

}  // namespace arrkit
