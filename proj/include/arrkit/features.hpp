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
#include <span>
#include <string>
#include <vector>

#include "arrkit/loan.hpp"

namespace arrkit {

enum class FeatureKind { numeric, categorical };

/// A predictor cell: a number, a category label, or missing.
struct FeatureValue {
  enum class State { missing, number, category };
  State state = State::missing;
  double number = 0.0;
  std::string category;

  bool is_missing() const { return state == State::missing; }
  static FeatureValue missing() { return {}; }
  static FeatureValue of(double v) {
    return {State::number, v, {}};
  }
  static FeatureValue of(std::string v) {
    return {State::category, 0.0, std::move(v)};
  }
};

/// Descriptor for one of the 27 predictor attributes: its name, whether it
/// is numeric or categorical, and how to read it from a LoanRecord.
struct FeatureAccessor {
  std::string name;
  FeatureKind kind;
  FeatureValue (*get)(const LoanRecord&);
  void (*set)(LoanRecord&, const FeatureValue&);
};

/// The full predictor table in its canonical order: 10 loan
/// characteristics, 11 credit worthiness attributes, 6 borrower attributes.
std::span<const FeatureAccessor> predictor_features();

const FeatureAccessor* find_feature(const std::string& name);  // nullptr if unknown

std::vector<std::string> predictor_feature_names();

}  // namespace arrkit
