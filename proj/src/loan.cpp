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

#include "arrkit/loan.hpp"

#include <cmath>

#include "arrkit/errors.hpp"

namespace arrkit {

const char* to_string(RawState state) {
  switch (state) {
    case RawState::fully_paid: return "fully_paid";
    case RawState::charged_off: return "charged_off";
    case RawState::intermediate: return "intermediate";
  }
  return "?";
}

std::optional<RawState> raw_state_from_string(const std::string& label) {
  if (label == "fully_paid") return RawState::fully_paid;
  if (label == "charged_off") return RawState::charged_off;
  if (label == "intermediate") return RawState::intermediate;
  return std::nullopt;
}

double compute_arr(double total_payment, double principal, double years) {
  if (!(principal > 0.0)) {
    throw InvalidArgumentError("compute_arr: principal must be positive");
  }
  if (!(years > 0.0)) {
    throw InvalidArgumentError("compute_arr: years must be positive");
  }
  if (total_payment < 0.0) {
    throw InvalidArgumentError("compute_arr: total_payment must be non-negative");
  }
  return std::pow(total_payment / principal, 1.0 / years);
}

double compute_simple_return(double total_payment, double principal) {
  if (!(principal > 0.0)) {
    throw InvalidArgumentError(
        "compute_simple_return: principal must be positive");
  }
  return (total_payment - principal) / principal;
}

ProfitOutcome derive_outcome(const LoanRecord& record, const ArrCap& cap) {
  if (record.raw_state == RawState::intermediate) {
    throw DataError("derive_outcome: record " + std::to_string(record.loan_id) +
                    " is still in an intermediate state; filter before deriving");
  }
  ProfitOutcome outcome;
  outcome.loan_status = record.raw_state == RawState::charged_off ? 1 : 0;
  outcome.years = record.months_elapsed / 12.0;
  outcome.arr = compute_arr(record.total_payment, record.principal, outcome.years);
  if (cap.enabled && outcome.arr > cap.ceiling) outcome.arr = cap.ceiling;
  return outcome;
}

namespace {

bool valid_grade(const std::string& grade) {
  return grade.size() == 1 && grade[0] >= 'A' && grade[0] <= 'G';
}

bool valid_sub_grade(const std::string& sub) {
  return sub.size() == 2 && sub[0] >= 'A' && sub[0] <= 'G' && sub[1] >= '1' &&
         sub[1] <= '5';
}

}  // namespace

std::optional<std::string> LoanRecord::validate() const {
  if (!(principal > 0.0)) return "principal must be positive";
  if (total_payment < 0.0) return "total_payment must be non-negative";
  if (months_elapsed < 1) return "months_elapsed must be at least 1";
  const auto& lc = loan_characteristics;
  if (lc.grade && !valid_grade(*lc.grade)) {
    return "grade must be one of A..G, got '" + *lc.grade + "'";
  }
  if (lc.sub_grade) {
    if (!valid_sub_grade(*lc.sub_grade)) {
      return "sub_grade must be one of A1..G5, got '" + *lc.sub_grade + "'";
    }
    if (lc.grade && (*lc.sub_grade)[0] != (*lc.grade)[0]) {
      return "sub_grade '" + *lc.sub_grade + "' does not match grade '" +
             *lc.grade + "'";
    }
  }
  const auto& cw = credit_worthiness;
  if (cw.fico_range_low && cw.fico_range_high &&
      *cw.fico_range_low > *cw.fico_range_high) {
    return "fico_range_low exceeds fico_range_high";
  }
  return std::nullopt;
}

}  // namespace arrkit
