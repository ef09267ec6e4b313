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

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "arrkit/loan.hpp"
#include "arrkit/pipeline.hpp"

namespace arrkit {

// Flat "key = value" configuration file ('#' starts a comment). Every key
// the toolkit understands is listed in the README; unknown keys are an
// error so typos cannot silently fall back to defaults.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;

  /// Throws ConfigError when any parsed key was never read.
  void ensure_fully_consumed() const;

  /// Deterministic "key = value" dump, sorted by key; hashed into run
  /// manifests.
  std::string canonical_text() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
};

/// Builds the pipeline configuration from defaults plus overrides.
PipelineConfig pipeline_config_from(const KeyValueConfig& config);

/// "outcome.arr_cap": a ceiling, or "none" for the uncapped Eq.-faithful
/// behaviour. Default caps at 10.
ArrCap arr_cap_from(const KeyValueConfig& config);

}  // namespace arrkit
