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

#include "arrkit/textio.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <system_error>

namespace arrkit::textio {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_double_hex(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

namespace {

std::optional<double> parse_with(std::string_view text, std::chars_format fmt) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  bool negative = false;
  std::string_view body = text;
  // from_chars(hex) does not accept a sign; handle it here so both formats
  // share one code path.
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
    if (body.empty()) return std::nullopt;
  }
  auto res = std::from_chars(body.data(), body.data() + body.size(), value, fmt);
  if (res.ec != std::errc{} || res.ptr != body.data() + body.size()) {
    return std::nullopt;
  }
  return negative ? -value : value;
}

}  // namespace

std::optional<double> parse_double(std::string_view text) {
  return parse_with(text, std::chars_format::general);
}

std::optional<double> parse_double_hex(std::string_view text) {
  return parse_with(text, std::chars_format::hex);
}

std::optional<long long> parse_int(std::string_view text) {
  if (text.empty()) return std::nullopt;
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

namespace {

bool needs_escape(unsigned char c) {
  return c <= 0x20 || c == 0x7f || c == '%' || c == '=' || c == ',';
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string encode_token(std::string_view raw) {
  static const char* digits = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (needs_escape(c)) {
      out.push_back('%');
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 0xf]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  // An empty category is still a value; give it a spelling.
  if (out.empty()) out = "%00";
  return out;
}

std::optional<std::string> decode_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    char c = token[i];
    if (c != '%') {
      out.push_back(c);
      continue;
    }
    if (i + 2 >= token.size()) return std::nullopt;
    int hi = hex_digit(token[i + 1]);
    int lo = hex_digit(token[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    unsigned char decoded = static_cast<unsigned char>((hi << 4) | lo);
    if (decoded != 0) out.push_back(static_cast<char>(decoded));
    i += 2;
  }
  return out;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace arrkit::textio
