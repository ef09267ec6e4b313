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
#include <optional>
#include <string>

namespace arrkit {

/// Terminal repayment state of an expired loan. Loans still being repaid
/// are `intermediate` and are filtered out before modeling.
enum class RawState { fully_paid, charged_off, intermediate };

const char* to_string(RawState state);
std::optional<RawState> raw_state_from_string(const std::string& label);

// The ten "loan characteristics" attributes. Any of them may be absent in
// real data; absence is handled downstream by pruning and imputation.
struct LoanCharacteristics {
  std::optional<std::string> application_type;
  std::optional<double> dti;
  std::optional<std::string> grade;       // "A".."G"
  std::optional<std::string> initial_list_status;
  std::optional<double> installment;
  std::optional<double> loan_amnt;
  std::optional<std::string> purpose;
  std::optional<std::string> sub_grade;   // "A1".."G5"
  std::optional<std::string> term;        // "36 months" / "60 months"
  std::optional<std::string> verification_status;
};

// The eleven numeric "credit worthiness" attributes.
struct CreditWorthiness {
  std::optional<double> acc_now_delinq;
  std::optional<double> deling_2yrs;
  std::optional<double> cr_line_month;
  std::optional<double> fico_range_high;
  std::optional<double> fico_range_low;
  std::optional<double> inq_last_6mths;
  std::optional<double> open_acc;
  std::optional<double> pub_rec;
  std::optional<double> revol_bal;
  std::optional<double> revol_util;
  std::optional<double> total_acc;
};

// The six "borrower information" attributes.
struct BorrowerInfo {
  std::optional<std::string> addr_state;
  std::optional<double> annual_inc;
  std::optional<double> emp_length;
  std::optional<std::string> emp_title;
  std::optional<std::string> home_ownership;
  std::optional<std::string> zip_code;
};

/// One loan: the 27 predictor attributes plus the raw repayment facts the
/// targets are derived from.
struct LoanRecord {
  std::uint64_t loan_id = 0;
  LoanCharacteristics loan_characteristics;
  CreditWorthiness credit_worthiness;
  BorrowerInfo borrower_info;

  RawState raw_state = RawState::intermediate;
  double total_payment = 0.0;  // Pa, >= 0
  double principal = 0.0;      // Pr, > 0
  int months_elapsed = 0;      // issuance to expiry, >= 1

  /// Checks the record-level invariants (positive principal, grade in
  /// A..G, sub_grade letter matching grade, fico_low <= fico_high, ...).
  /// Returns an explanation for the first violation, nullopt when valid.
  std::optional<std::string> validate() const;
};

/// Derived modeling targets for one loan.
struct ProfitOutcome {
  int loan_status = 0;  // 0 fully paid, 1 charged off
  double arr = 0.0;     // annualized rate of return, >= 0
  double years = 0.0;   // repayment duration, months / 12
};

/// Optional ceiling on derived ARR values. Short-lived loans can produce
/// arbitrarily large annualized returns; the default caps them at 10.
struct ArrCap {
  bool enabled = true;
  double ceiling = 10.0;

  static ArrCap capped(double ceiling) { return {true, ceiling}; }
  static ArrCap none() { return {false, 0.0}; }
};

/// Annualized rate of return (Pa / Pr)^(1 / Y).
/// Throws InvalidArgumentError when principal or years is not positive or
/// total_payment is negative.
double compute_arr(double total_payment, double principal, double years);

/// Plain fractional return (Pa - Pr) / Pr, ignoring duration.
double compute_simple_return(double total_payment, double principal);

/// Derives (loan_status, ARR, years) from the repayment facts. The record
/// must have a terminal state; intermediate records throw DataError.
ProfitOutcome derive_outcome(const LoanRecord& record, const ArrCap& cap = ArrCap{});

}  // namespace arrkit
