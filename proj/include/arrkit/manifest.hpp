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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arrkit {

/// Provenance record written next to every artifact a CLI command
/// produces. Timestamps and timing live only here, so artifact files stay
/// byte-identical across reruns with the same seeds.
struct RunManifest {
  std::string command;
  std::string toolkit_version;
  std::string config_hash;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::uint64_t>> row_counts;
  double elapsed_seconds = 0.0;
  std::string kernel_backend;
  int threads = 1;
  std::string timestamp_utc;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

std::uint64_t fnv1a64(std::string_view text);
std::string hash_hex(std::uint64_t value);
std::string utc_timestamp_now();

}  // namespace arrkit
