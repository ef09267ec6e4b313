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

#include "arrkit/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "arrkit/csv.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/textio.hpp"

namespace arrkit {

namespace {

std::vector<std::size_t> ranked_order(std::span<const ScoredLoan> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].arr_hat != scores[b].arr_hat) {
      return scores[a].arr_hat > scores[b].arr_hat;
    }
    return scores[a].loan_id < scores[b].loan_id;
  });
  return order;
}

std::unordered_map<std::uint64_t, std::size_t> row_index_by_id(
    const LoanTable& table) {
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    index.emplace(table.records[i].loan_id, i);
  }
  return index;
}

std::size_t row_of(const std::unordered_map<std::uint64_t, std::size_t>& index,
                   std::uint64_t loan_id) {
  auto it = index.find(loan_id);
  if (it == index.end()) {
    throw InvalidArgumentError("unknown loan_id " + std::to_string(loan_id));
  }
  return it->second;
}

}  // namespace

std::vector<std::uint64_t> top_k_selection(std::span<const ScoredLoan> scores,
                                           std::size_t k) {
  if (k < 1 || k > scores.size()) {
    throw InvalidArgumentError("top_k_selection: k must be in [1, " +
                               std::to_string(scores.size()) + "], got " +
                               std::to_string(k));
  }
  auto order = ranked_order(scores);
  std::vector<std::uint64_t> selection;
  selection.reserve(k);
  for (std::size_t i = 0; i < k; ++i) selection.push_back(scores[order[i]].loan_id);
  return selection;
}

std::vector<TopKPoint> topk_curve(std::span<const ScoredLoan> scores,
                                  const LoanTable& table, std::size_t k_max) {
  if (k_max < 1 || k_max > scores.size()) {
    throw InvalidArgumentError("topk_curve: k_max out of range");
  }
  auto order = ranked_order(scores);
  auto index = row_index_by_id(table);
  std::vector<TopKPoint> curve;
  curve.reserve(k_max);
  double running = 0.0;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::size_t row = row_of(index, scores[order[k - 1]].loan_id);
    running += table.outcomes[row].arr;
    curve.push_back({k, running / static_cast<double>(k)});
  }
  return curve;
}

std::vector<GradeCount> grade_constitution(
    std::span<const std::uint64_t> selection, const LoanTable& table) {
  auto index = row_index_by_id(table);
  std::vector<GradeCount> counts;
  counts.reserve(8);
  for (char g = 'A'; g <= 'G'; ++g) counts.push_back({std::string(1, g), 0, 0});
  GradeCount unknown{"?", 0, 0};
  for (std::uint64_t id : selection) {
    std::size_t row = row_of(index, id);
    const auto& grade = table.records[row].loan_characteristics.grade;
    GradeCount& slot =
        grade ? counts[static_cast<std::size_t>((*grade)[0] - 'A')] : unknown;
    slot.count += 1;
    slot.default_count +=
        table.outcomes[row].loan_status == 1 ? std::size_t{1} : std::size_t{0};
  }
  if (unknown.count > 0) counts.push_back(unknown);
  return counts;
}

std::pair<double, double> summary_metrics(std::span<const std::uint64_t> selection,
                                          const LoanTable& table) {
  if (selection.empty()) {
    throw InvalidArgumentError("summary_metrics: empty selection");
  }
  auto index = row_index_by_id(table);
  double arr_total = 0.0;
  std::size_t defaults = 0;
  for (std::uint64_t id : selection) {
    std::size_t row = row_of(index, id);
    arr_total += table.outcomes[row].arr;
    defaults += table.outcomes[row].loan_status == 1 ? 1 : 0;
  }
  const double n = static_cast<double>(selection.size());
  return {arr_total / n, static_cast<double>(defaults) / n};
}

std::vector<CrossTableRow> cross_table(const LoanTable& table) {
  if (table.empty()) throw InvalidArgumentError("cross_table: empty table");
  std::size_t paid_le = 0, paid_gt = 0, def_le = 0, def_gt = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    bool profitable = table.outcomes[i].arr > 1.0;
    if (table.outcomes[i].loan_status == 0) {
      (profitable ? paid_gt : paid_le) += 1;
    } else {
      (profitable ? def_gt : def_le) += 1;
    }
  }
  const double total = static_cast<double>(table.size());
  std::vector<CrossTableRow> rows;
  auto add = [&](int status, const char* band, std::size_t count) {
    if (count > 0) {
      rows.push_back({status, band, count, static_cast<double>(count) / total});
    }
  };
  if (paid_le == 0) {
    add(0, "any", paid_gt);
  } else {
    add(0, "<=1", paid_le);
    add(0, ">1", paid_gt);
  }
  add(1, "<=1", def_le);
  add(1, ">1", def_gt);
  return rows;
}

double rmse(std::span<const double> predicted, std::span<const double> realized) {
  if (predicted.size() != realized.size()) {
    throw InvalidArgumentError("rmse: length mismatch");
  }
  if (predicted.empty()) throw InvalidArgumentError("rmse: empty input");
  return std::sqrt(kernels::sum_squared_diff(predicted, realized) /
                   static_cast<double>(predicted.size()));
}

EvaluationReport evaluate(std::span<const ScoredLoan> scores,
                          const LoanTable& table, std::size_t k_max) {
  if (scores.size() != table.size()) {
    throw InvalidArgumentError("evaluate: scores and table size mismatch");
  }
  EvaluationReport report;
  report.k_max = k_max;
  report.topk_curve = topk_curve(scores, table, k_max);
  auto selection = top_k_selection(scores, k_max);
  report.grade_table = grade_constitution(selection, table);
  std::tie(report.top_average_arr, report.top_default_rate) =
      summary_metrics(selection, table);
  report.cross_table = cross_table(table);

  auto index = row_index_by_id(table);
  std::vector<double> predicted, realized;
  predicted.reserve(scores.size());
  realized.reserve(scores.size());
  for (const auto& score : scores) {
    predicted.push_back(score.arr_hat);
    realized.push_back(table.outcomes[row_of(index, score.loan_id)].arr);
  }
  report.rmse = rmse(predicted, realized);
  return report;
}

void write_topk_curve_csv(std::ostream& out, std::span<const NamedReport> reports) {
  out << "k";
  for (const auto& named : reports) {
    out << ',' << csv::escape_field("mean_realized_arr_" + named.model);
  }
  out << '\n';
  if (reports.empty()) return;
  std::size_t k_max = reports[0].report->topk_curve.size();
  for (std::size_t i = 0; i < k_max; ++i) {
    out << (i + 1);
    for (const auto& named : reports) {
      out << ','
          << textio::format_double(named.report->topk_curve[i].mean_realized_arr);
    }
    out << '\n';
  }
}

void write_grade_table_csv(std::ostream& out, std::span<const NamedReport> reports) {
  out << "model,grade,count,default_count\n";
  std::vector<std::string> fields(4);
  for (const auto& named : reports) {
    for (const auto& row : named.report->grade_table) {
      fields[0] = named.model;
      fields[1] = row.grade;
      fields[2] = std::to_string(row.count);
      fields[3] = std::to_string(row.default_count);
      csv::write_row(out, fields);
    }
  }
}

void write_summary_csv(std::ostream& out, std::span<const NamedReport> reports) {
  out << "model,k,average_arr,default_rate,rmse\n";
  std::vector<std::string> fields(5);
  for (const auto& named : reports) {
    fields[0] = named.model;
    fields[1] = std::to_string(named.report->k_max);
    fields[2] = textio::format_double(named.report->top_average_arr);
    fields[3] = textio::format_double(named.report->top_default_rate);
    fields[4] = textio::format_double(named.report->rmse);
    csv::write_row(out, fields);
  }
}

void write_cross_table_csv(std::ostream& out, const EvaluationReport& report) {
  out << "loan_status,arr_band,count,proportion\n";
  std::vector<std::string> fields(4);
  for (const auto& row : report.cross_table) {
    fields[0] = std::to_string(row.status);
    fields[1] = row.arr_band;
    fields[2] = std::to_string(row.count);
    fields[3] = textio::format_double(row.proportion);
    csv::write_row(out, fields);
  }
}

}  // namespace arrkit
