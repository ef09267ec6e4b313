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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arrkit/loan.hpp"

namespace arrkit {

/// Loans plus their derived targets, kept in parallel arrays.
struct LoanTable {
  std::vector<LoanRecord> records;
  std::vector<ProfitOutcome> outcomes;
  std::string schema_version = "lc27-v1";

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }

  /// Copies the selected row positions into a new table.
  LoanTable take(std::span<const std::uint32_t> rows) const;
};

/// Train/test split parameters.
struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

/// Maps canonical column names to CSV headers. Every entry is a candidate
/// list; the first header present in the file wins. Defaults cover both
/// this toolkit's own CSV output and the Lending Club export schema.
struct ColumnMap {
  std::vector<std::string> id = {"id", "loan_id"};
  std::vector<std::string> state = {"loan_status"};
  std::vector<std::string> total_payment = {"total_pymnt"};
  std::vector<std::string> principal = {"funded_amnt"};
  // Repayment duration in months. When absent it is derived from the
  // issue / last payment dates below.
  std::vector<std::string> months_elapsed = {"last_pymnt_months_since_issue"};
  std::vector<std::string> issue_date = {"issue_d"};
  std::vector<std::string> last_payment_date = {"last_pymnt_d"};
  std::vector<std::string> earliest_credit_line = {"earliest_cr_line"};

  /// Predictor name -> candidate headers; unlisted predictors use their
  /// canonical name. (deling_2yrs additionally tries the Lending Club
  /// spelling delinq_2yrs; cr_line_month falls back to a date diff.)
  std::map<std::string, std::vector<std::string>> features;

  /// Cell values treated as missing.
  std::vector<std::string> missing_tokens = {"", "NA"};

  static ColumnMap defaults();
};

struct RejectedRow {
  std::size_t row_number = 0;  // 1-based data row index
  std::string loan_id;         // raw cell text, may be empty
  std::string reason;
};

struct LoadReport {
  std::size_t rows_seen = 0;
  std::size_t rows_loaded = 0;
  std::size_t dropped_intermediate = 0;
  std::vector<RejectedRow> rejects;
};

struct LoadResult {
  LoanTable table;
  LoadReport report;
};

/// Reads a loan CSV, drops intermediate loans, derives outcomes, and
/// collects malformed rows into the report instead of failing the load.
/// Throws SchemaError when a mandatory column is missing entirely.
LoadResult load_csv(const std::string& path, const ColumnMap& columns,
                    const ArrCap& cap = ArrCap{});
LoadResult load_csv_text(std::string_view text, const ColumnMap& columns,
                         const ArrCap& cap = ArrCap{});

/// Writes the rejects report (loan_id, reason) as CSV.
void write_rejects_csv(std::ostream& out, std::span<const RejectedRow> rejects);

/// Writes a table in this toolkit's canonical CSV layout, readable back
/// through load_csv with the default column map. Deterministic byte-wise.
void write_table_csv(std::ostream& out, const LoanTable& table);

/// Names of predictors whose missing fraction does not exceed the
/// threshold (strict: a feature is dropped iff fraction > threshold).
std::vector<std::string> prune_sparse_features(const LoanTable& table,
                                               double max_missing_fraction = 0.7);

/// Partition sizes used by split(): train is floor(n * train_fraction),
/// clamped so both sides are non-empty.
std::pair<std::size_t, std::size_t> split_sizes(std::size_t n, double train_fraction);

/// Seeded disjoint partition; sizes per split_sizes().
std::pair<LoanTable, LoanTable> split(const LoanTable& table, const SplitSpec& spec);

// ---- synthetic data --------------------------------------------------------

/// Generator shape: a latent risk score r ~ U(0,1) drives grade, interest
/// rate and default probability (both increasing in r); predictors are
/// noisy views of r. Curves are piecewise-linear between per-grade anchors.
struct SynthConfig {
  // Upper r-quantile of grades A..F (G takes the rest).
  std::array<double, 6> grade_cuts = {0.16, 0.40, 0.68, 0.86, 0.95, 0.99};
  // Nominal yearly interest rate anchored at each grade's band midpoint.
  std::array<double, 7> grade_interest_rate = {0.068, 0.10, 0.135, 0.175,
                                               0.215, 0.25,  0.285};
  // Default probability anchored at each grade's band midpoint; the
  // defaults target an overall rate close to one loan in five.
  std::array<double, 7> grade_default_rate = {0.07, 0.13, 0.19, 0.27,
                                              0.35, 0.44, 0.52};
  double sixty_month_fraction = 0.3;  // share of 60-month terms
  double early_payoff_fraction = 0.35;
  double recovery_fraction = 0.3;     // defaulted loans with partial recovery
  double missing_cell_rate = 0.03;    // light missingness on some predictors
  ArrCap arr_cap;
};

/// Deterministic synthetic loan table: same (n, seed, config) gives the
/// same table on every platform.
LoanTable generate_synthetic(std::size_t n, std::uint64_t seed,
                             const SynthConfig& config = {});

}  // namespace arrkit
