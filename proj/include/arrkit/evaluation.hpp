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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "arrkit/dataset.hpp"
#include "arrkit/pipeline.hpp"

namespace arrkit {

// Comparison protocol for scored loan books: how profitable are the k
// loans a model ranks highest, measured by their realized (not predicted)
// ARR, plus the grade mix and default rate of the selection.

struct TopKPoint {
  std::size_t k = 0;
  double mean_realized_arr = 0.0;
};

struct GradeCount {
  std::string grade;  // "A".."G", or "?" for loans without a grade
  std::size_t count = 0;
  std::size_t default_count = 0;
};

struct CrossTableRow {
  int status = 0;
  std::string arr_band;  // "any", "<=1", ">1"
  std::size_t count = 0;
  double proportion = 0.0;
};

struct EvaluationReport {
  std::vector<TopKPoint> topk_curve;        // k = 1..k_max
  std::vector<GradeCount> grade_table;      // of the top-k_max selection
  double top_average_arr = 0.0;             // over the top-k_max selection
  double top_default_rate = 0.0;
  double rmse = 0.0;                        // arr_hat vs realized, all loans
  std::vector<CrossTableRow> cross_table;   // of the whole table
  std::size_t k_max = 0;
};

/// The k loans with the highest arr_hat; ties prefer the lower loan_id.
std::vector<std::uint64_t> top_k_selection(std::span<const ScoredLoan> scores,
                                           std::size_t k);

/// Mean realized ARR of the top-k selection, for every k in 1..k_max.
std::vector<TopKPoint> topk_curve(std::span<const ScoredLoan> scores,
                                  const LoanTable& table, std::size_t k_max = 50);

/// Count and default count per grade A..G over the selection (all seven
/// grades are always present; a "?" row appears only for ungraded loans).
std::vector<GradeCount> grade_constitution(
    std::span<const std::uint64_t> selection, const LoanTable& table);

/// (mean realized ARR, default rate) of the selection.
std::pair<double, double> summary_metrics(std::span<const std::uint64_t> selection,
                                          const LoanTable& table);

/// Loan_status x ARR-band counts with proportions over the whole table.
/// Fully paid loans collapse into a single "any" band unless some of them
/// have ARR <= 1, in which case both bands are reported explicitly.
std::vector<CrossTableRow> cross_table(const LoanTable& table);

/// Root mean squared error.
double rmse(std::span<const double> predicted, std::span<const double> realized);

/// Assembles the full report for one model's scores.
EvaluationReport evaluate(std::span<const ScoredLoan> scores,
                          const LoanTable& table, std::size_t k_max = 50);

// ---- report files -----------------------------------------------------------
// Column layouts are documented in the README. Writers take one report per
// model so side-by-side comparisons land in a single file.

struct NamedReport {
  std::string model;
  const EvaluationReport* report = nullptr;
};

void write_topk_curve_csv(std::ostream& out, std::span<const NamedReport> reports);
void write_grade_table_csv(std::ostream& out, std::span<const NamedReport> reports);
void write_summary_csv(std::ostream& out, std::span<const NamedReport> reports);
void write_cross_table_csv(std::ostream& out, const EvaluationReport& report);

}  // namespace arrkit
