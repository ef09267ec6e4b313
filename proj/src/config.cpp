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

#include "arrkit/config.hpp"

#include <fstream>
#include <sstream>

#include "arrkit/errors.hpp"
#include "arrkit/textio.hpp"

namespace arrkit {

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string trimmed = textio::trim(line);
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected 'key = value', got '" + trimmed + "'");
    }
    std::string key = textio::trim(trimmed.substr(0, eq));
    std::string value = textio::trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": empty key");
    }
    if (config.values_.count(key)) {
      throw ConfigError("config: duplicate key '" + key + "'");
    }
    config.values_[key] = value;
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::optional<std::string> KeyValueConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  consumed_[key] = true;
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  auto raw = get_string(key);
  if (!raw) return std::nullopt;
  auto value = textio::parse_double(*raw);
  if (!value) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      *raw + "'");
  }
  return value;
}

std::optional<long long> KeyValueConfig::get_int(const std::string& key) const {
  auto raw = get_string(key);
  if (!raw) return std::nullopt;
  auto value = textio::parse_int(*raw);
  if (!value) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      *raw + "'");
  }
  return value;
}

void KeyValueConfig::ensure_fully_consumed() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unknown config keys: " + unknown);
  }
}

std::string KeyValueConfig::canonical_text() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) {
    out << key << " = " << value << '\n';
  }
  return out.str();
}

namespace {

void read_gbdt(const KeyValueConfig& config, const std::string& prefix,
               gbdt::GbdtConfig& out) {
  if (auto v = config.get_int(prefix + ".max_depth")) out.max_depth = static_cast<int>(*v);
  if (auto v = config.get_int(prefix + ".num_leaves")) out.num_leaves = static_cast<int>(*v);
  if (auto v = config.get_double(prefix + ".feature_fraction")) out.feature_fraction = *v;
  if (auto v = config.get_double(prefix + ".bagging_fraction")) out.bagging_fraction = *v;
  if (auto v = config.get_double(prefix + ".learning_rate")) out.learning_rate = *v;
  if (auto v = config.get_int(prefix + ".num_rounds")) out.num_rounds = static_cast<int>(*v);
  if (auto v = config.get_int(prefix + ".early_stopping_rounds")) {
    out.early_stopping_rounds = static_cast<int>(*v);
  }
  if (auto v = config.get_int(prefix + ".max_bins")) out.max_bins = static_cast<int>(*v);
  if (auto v = config.get_int(prefix + ".min_samples_leaf")) {
    out.min_samples_leaf = static_cast<int>(*v);
  }
  if (auto v = config.get_double(prefix + ".lambda_l2")) out.lambda_l2 = *v;
  if (auto v = config.get_int(prefix + ".seed")) out.seed = static_cast<std::uint64_t>(*v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      out.push_back(textio::trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  current = textio::trim(current);
  if (!current.empty()) out.push_back(current);
  return out;
}

}  // namespace

PipelineConfig pipeline_config_from(const KeyValueConfig& config) {
  PipelineConfig out;
  if (auto v = config.get_string("mode")) {
    auto mode = pipeline_mode_from_string(*v);
    if (!mode) throw ConfigError("config key 'mode': expected one_stage or two_stage");
    out.mode = *mode;
  }
  if (auto v = config.get_string("pd_feature_name")) out.pd_feature_name = *v;
  if (auto v = config.get_string("cross_fit_folds")) {
    if (*v == "in_sample" || *v == "in-sample") {
      out.cross_fit_folds = 1;
    } else {
      auto folds = textio::parse_int(*v);
      if (!folds || *folds < 1) {
        throw ConfigError(
            "config key 'cross_fit_folds': expected an integer >= 2 or "
            "'in_sample'");
      }
      out.cross_fit_folds = static_cast<int>(*folds);
    }
  }
  if (auto v = config.get_double("prune_max_missing")) out.prune_max_missing = *v;
  if (auto v = config.get_double("validation_fraction")) out.validation_fraction = *v;
  if (auto v = config.get_int("seed")) out.seed = static_cast<std::uint64_t>(*v);
  if (auto v = config.get_double("split.train_fraction")) out.split.train_fraction = *v;
  if (auto v = config.get_int("split.seed")) out.split.seed = static_cast<std::uint64_t>(*v);
  if (auto v = config.get_int("encoder.top_k_categories")) {
    out.encoder.top_k_categories = static_cast<std::size_t>(*v);
  }
  if (auto v = config.get_string("encoder.high_cardinality")) {
    out.encoder.high_cardinality = split_list(*v);
  }
  read_gbdt(config, "stage1", out.stage1);
  read_gbdt(config, "stage2", out.stage2);
  out.validate();
  return out;
}

ArrCap arr_cap_from(const KeyValueConfig& config) {
  auto raw = config.get_string("outcome.arr_cap");
  if (!raw) return ArrCap{};
  if (*raw == "none") return ArrCap::none();
  auto value = textio::parse_double(*raw);
  if (!value || !(*value > 0.0)) {
    throw ConfigError("config key 'outcome.arr_cap': expected a positive number "
                      "or 'none'");
  }
  return ArrCap::capped(*value);
}

}  // namespace arrkit
