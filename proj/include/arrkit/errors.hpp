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

#include <stdexcept>
#include <string>

namespace arrkit {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated (bad sizes, out-of-range
/// values, non-positive principal, duplicate column names, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input data does not match the expected schema (missing column,
/// incompatible feature set between a model and a matrix).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Data-level problem: a record that must not reach this point
/// (intermediate loans), a degenerate target, an unencodable feature.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration file or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (unreadable/unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

/// A violated internal invariant, e.g. histogram totals that disagree
/// with the node statistics they were accumulated from.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace arrkit
