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

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arrkit::csv {

// RFC 4180 table: header row plus data rows. Quoted fields may contain
// commas, doubled quotes and newlines; CRLF and LF are both accepted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(std::string_view name) const;  // npos when absent
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

Table read_file(const std::string& path);
Table parse(std::string_view text);

/// Writes one record, quoting only fields that need it, LF line ending.
void write_row(std::ostream& out, std::span<const std::string> fields);

std::string escape_field(std::string_view field);

}  // namespace arrkit::csv
