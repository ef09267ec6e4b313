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

#include "arrkit/manifest.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "arrkit/errors.hpp"

namespace arrkit {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hash_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["command"] = manifest.command;
  doc["toolkit_version"] = manifest.toolkit_version;
  doc["config_hash"] = manifest.config_hash;
  nlohmann::ordered_json seeds = nlohmann::ordered_json::object();
  for (const auto& [name, value] : manifest.seeds) seeds[name] = value;
  doc["seeds"] = seeds;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [name, value] : manifest.inputs) inputs[name] = value;
  doc["inputs"] = inputs;
  nlohmann::ordered_json rows = nlohmann::ordered_json::object();
  for (const auto& [name, value] : manifest.row_counts) rows[name] = value;
  doc["row_counts"] = rows;
  doc["elapsed_seconds"] = manifest.elapsed_seconds;
  doc["kernel_backend"] = manifest.kernel_backend;
  doc["threads"] = manifest.threads;
  doc["timestamp_utc"] = manifest.timestamp_utc;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("error writing manifest: " + path);
}

}  // namespace arrkit
