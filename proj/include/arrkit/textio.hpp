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
#include <string>
#include <string_view>

namespace arrkit::textio {

/// Shortest decimal string that round-trips the exact double value.
std::string format_double(double value);

/// Hexadecimal float ("1.91eb851eb851fp+0"); lossless by construction.
/// Used in the model/encoder text formats where bit-exact round-trips
/// are part of the contract.
std::string format_double_hex(double value);

/// Parses either decimal or hexadecimal float text; the whole string must
/// be consumed. Returns nullopt on failure.
std::optional<double> parse_double(std::string_view text);
std::optional<double> parse_double_hex(std::string_view text);

std::optional<long long> parse_int(std::string_view text);

/// Percent-encoding for whitespace-delimited token streams. Encodes '%',
/// control characters, space, '=' and ','; everything else passes through,
/// so "Joint App" becomes "Joint%20App".
std::string encode_token(std::string_view raw);
std::optional<std::string> decode_token(std::string_view token);

std::string trim(std::string_view text);

}  // namespace arrkit::textio
