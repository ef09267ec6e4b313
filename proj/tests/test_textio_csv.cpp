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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdint>
#include <sstream>

#include "arrkit/csv.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/rng.hpp"
#include "arrkit/textio.hpp"

using namespace arrkit;

TEST_CASE("double formatting round-trips exactly") {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    double value = std::bit_cast<double>(rng.next_u64());
    if (!std::isfinite(value)) continue;
    auto decimal = textio::parse_double(textio::format_double(value));
    REQUIRE(decimal.has_value());
    CHECK(std::bit_cast<std::uint64_t>(*decimal) ==
          std::bit_cast<std::uint64_t>(value));
    auto hex = textio::parse_double_hex(textio::format_double_hex(value));
    REQUIRE(hex.has_value());
    CHECK(std::bit_cast<std::uint64_t>(*hex) ==
          std::bit_cast<std::uint64_t>(value));
  }
  CHECK(!textio::parse_double("1.5x"));
  CHECK(!textio::parse_double(""));
  CHECK(textio::parse_double("-2.5e3").value() == -2500.0);
}

TEST_CASE("token encoding survives awkward category names") {
  for (const std::string raw :
       {"Joint App", "Sales Manager, Retail", "a=b", "100%", "", "percent%20",
        "tab\tsep", "newline\nin name", "ünïcode"}) {
    auto decoded = textio::decode_token(textio::encode_token(raw));
    REQUIRE(decoded.has_value());
    CHECK(*decoded == raw);
    // encoded tokens are whitespace-free so they survive tokenization
    for (char c : textio::encode_token(raw)) {
      CHECK(!std::isspace(static_cast<unsigned char>(c)));
    }
  }
  CHECK(!textio::decode_token("%zz"));
  CHECK(!textio::decode_token("%2"));
}

TEST_CASE("csv parses quoted fields") {
  auto table = csv::parse(
      "id,title,note\r\n"
      "1,\"Sales, Manager\",plain\r\n"
      "2,\"say \"\"hi\"\"\",\"line\nbreak\"\n"
      "3,,trailing\n");
  REQUIRE(table.header.size() == 3);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][1] == "Sales, Manager");
  CHECK(table.rows[1][1] == "say \"hi\"");
  CHECK(table.rows[1][2] == "line\nbreak");
  CHECK(table.rows[2][1].empty());
  CHECK(table.column_index("note") == 2);
  CHECK(table.column_index("nope") == csv::Table::npos);
}

TEST_CASE("csv write then parse is the identity") {
  std::vector<std::vector<std::string>> rows = {
      {"plain", "with,comma", "with\"quote"},
      {"", "multi\nline", "end"},
  };
  std::ostringstream out;
  csv::write_row(out, std::vector<std::string>{"a", "b", "c"});
  for (const auto& row : rows) csv::write_row(out, row);
  auto table = csv::parse(out.str());
  REQUIRE(table.rows.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(table.rows[i] == rows[i]);
  }
}

TEST_CASE("csv rejects an unterminated quote") {
  CHECK_THROWS_AS(csv::parse("a,b\n\"oops,1\n"), DataError);
}

TEST_CASE("missing csv file raises IoError") {
  CHECK_THROWS_AS(csv::read_file("/nonexistent/loans.csv"), IoError);
}
