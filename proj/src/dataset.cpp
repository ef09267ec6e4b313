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

#include "arrkit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "arrkit/csv.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/features.hpp"
#include "arrkit/rng.hpp"
#include "arrkit/textio.hpp"

namespace arrkit {

LoanTable LoanTable::take(std::span<const std::uint32_t> rows) const {
  LoanTable out;
  out.schema_version = schema_version;
  out.records.reserve(rows.size());
  out.outcomes.reserve(rows.size());
  for (std::uint32_t r : rows) {
    out.records.push_back(records[r]);
    out.outcomes.push_back(outcomes[r]);
  }
  return out;
}

ColumnMap ColumnMap::defaults() {
  ColumnMap map;
  map.features["deling_2yrs"] = {"deling_2yrs", "delinq_2yrs"};
  return map;
}

namespace {

struct RowError {
  std::string reason;
};

bool is_missing_token(const std::string& cell,
                      const std::vector<std::string>& tokens) {
  return std::find(tokens.begin(), tokens.end(), cell) != tokens.end();
}

std::optional<RawState> map_state_label(const std::string& raw) {
  std::string label = textio::trim(raw);
  if (auto canonical = raw_state_from_string(label)) return canonical;
  if (label.find("Fully Paid") != std::string::npos) return RawState::fully_paid;
  if (label.find("Charged Off") != std::string::npos) return RawState::charged_off;
  if (label.empty()) return std::nullopt;
  // Current / Late / In Grace Period / Default-not-yet-charged-off etc.
  return RawState::intermediate;
}

// Lenient numeric cell parse: trims, strips a trailing '%', understands the
// Lending Club emp_length spellings ("10+ years", "< 1 year").
std::optional<double> parse_numeric_cell(const std::string& raw,
                                         const std::string& feature) {
  std::string text = textio::trim(raw);
  if (feature == "emp_length") {
    if (text == "n/a") return std::nullopt;
    if (text.find("< 1") != std::string::npos) return 0.0;
    std::string digits;
    for (char c : text) {
      if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
      else if (!digits.empty()) break;
    }
    if (!digits.empty()) {
      if (auto v = textio::parse_double(digits)) return v;
    }
  }
  if (!text.empty() && text.back() == '%') text.pop_back();
  return textio::parse_double(text);
}

// "Dec-2015" or "2015-12" -> months since year zero.
std::optional<int> parse_month_index(const std::string& raw) {
  static const char* kMonths[12] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  std::string text = textio::trim(raw);
  auto dash = text.find('-');
  if (dash == std::string::npos) return std::nullopt;
  std::string a = text.substr(0, dash);
  std::string b = text.substr(dash + 1);
  auto month_from_name = [&](const std::string& name) -> std::optional<int> {
    for (int m = 0; m < 12; ++m) {
      if (name == kMonths[m]) return m;
    }
    return std::nullopt;
  };
  if (auto m = month_from_name(a)) {
    auto year = textio::parse_int(b);
    if (!year) return std::nullopt;
    long long y = *year < 100 ? *year + 2000 : *year;
    return static_cast<int>(y * 12 + *m);
  }
  if (auto m = month_from_name(b)) {
    auto year = textio::parse_int(a);
    if (!year) return std::nullopt;
    return static_cast<int>(*year * 12 + *m);
  }
  auto year = textio::parse_int(a);
  auto month = textio::parse_int(b);
  if (!year || !month || *month < 1 || *month > 12) return std::nullopt;
  return static_cast<int>(*year * 12 + (*month - 1));
}

class CsvLoader {
 public:
  CsvLoader(const csv::Table& table, const ColumnMap& columns, const ArrCap& cap)
      : table_(table), columns_(columns), cap_(cap) {
    resolve_columns();
  }

  LoadResult run() {
    LoadResult result;
    result.report.rows_seen = table_.rows.size();
    std::unordered_set<std::uint64_t> seen_ids;
    for (std::size_t i = 0; i < table_.rows.size(); ++i) {
      const auto& row = table_.rows[i];
      if (row.size() == 1 && row[0].empty()) continue;  // blank line
      std::size_t row_number = i + 1;
      try {
        if (row.size() != table_.header.size()) {
          throw RowError{"expected " + std::to_string(table_.header.size()) +
                         " fields, got " + std::to_string(row.size())};
        }
        LoanRecord record = parse_record(row);
        if (record.raw_state == RawState::intermediate) {
          ++result.report.dropped_intermediate;
          continue;
        }
        if (!seen_ids.insert(record.loan_id).second) {
          throw RowError{"duplicate loan_id " + std::to_string(record.loan_id)};
        }
        if (auto violation = record.validate()) throw RowError{*violation};
        result.table.outcomes.push_back(derive_outcome(record, cap_));
        result.table.records.push_back(std::move(record));
      } catch (const RowError& err) {
        result.report.rejects.push_back(
            {row_number, cell_or_empty(row, id_col_), err.reason});
      }
    }
    result.report.rows_loaded = result.table.size();
    return result;
  }

 private:
  static std::string cell_or_empty(const std::vector<std::string>& row,
                                   std::size_t col) {
    return col < row.size() ? row[col] : std::string{};
  }

  std::size_t resolve(const std::vector<std::string>& candidates) const {
    for (const auto& name : candidates) {
      std::size_t idx = table_.column_index(name);
      if (idx != csv::Table::npos) return idx;
    }
    return csv::Table::npos;
  }

  std::size_t resolve_required(const std::vector<std::string>& candidates,
                               const std::string& what) const {
    std::size_t idx = resolve(candidates);
    if (idx == csv::Table::npos) {
      throw SchemaError("missing mandatory column for " + what + " (tried: " +
                        join(candidates) + ")");
    }
    return idx;
  }

  static std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
      if (!out.empty()) out += ", ";
      out += n;
    }
    return out;
  }

  void resolve_columns() {
    id_col_ = resolve_required(columns_.id, "loan_id");
    state_col_ = resolve_required(columns_.state, "raw_state");
    payment_col_ = resolve_required(columns_.total_payment, "total_payment");
    principal_col_ = resolve_required(columns_.principal, "principal");
    months_col_ = resolve(columns_.months_elapsed);
    issue_col_ = resolve(columns_.issue_date);
    last_pymnt_col_ = resolve(columns_.last_payment_date);
    earliest_cr_col_ = resolve(columns_.earliest_credit_line);
    if (months_col_ == csv::Table::npos &&
        (issue_col_ == csv::Table::npos || last_pymnt_col_ == csv::Table::npos)) {
      throw SchemaError(
          "missing mandatory column for months_elapsed (tried: " +
          join(columns_.months_elapsed) +
          "; also no issue/last-payment date pair to derive it from)");
    }
    for (const auto& feature : predictor_features()) {
      std::vector<std::string> candidates = {feature.name};
      auto it = columns_.features.find(feature.name);
      if (it != columns_.features.end()) candidates = it->second;
      std::size_t idx = resolve(candidates);
      if (idx == csv::Table::npos) {
        // cr_line_month can be derived from the credit-history dates.
        if (feature.name == "cr_line_month" &&
            earliest_cr_col_ != csv::Table::npos &&
            issue_col_ != csv::Table::npos) {
          feature_cols_.push_back({&feature, csv::Table::npos});
          continue;
        }
        throw SchemaError("missing mandatory column for predictor " +
                          feature.name + " (tried: " + join(candidates) + ")");
      }
      feature_cols_.push_back({&feature, idx});
    }
  }

  bool missing(const std::string& cell) const {
    return is_missing_token(textio::trim(cell), columns_.missing_tokens);
  }

  LoanRecord parse_record(const std::vector<std::string>& row) const {
    LoanRecord record;

    const std::string& id_cell = row[id_col_];
    auto id = textio::parse_int(textio::trim(id_cell));
    if (!id || *id < 0) throw RowError{"unparseable loan_id '" + id_cell + "'"};
    record.loan_id = static_cast<std::uint64_t>(*id);

    auto state = map_state_label(row[state_col_]);
    if (!state) throw RowError{"unrecognized loan state '" + row[state_col_] + "'"};
    record.raw_state = *state;
    if (record.raw_state == RawState::intermediate) return record;

    record.total_payment = require_number(row, payment_col_, "total_payment");
    record.principal = require_number(row, principal_col_, "principal");
    record.months_elapsed = parse_months(row, record.total_payment);

    for (const auto& [feature, col] : feature_cols_) {
      if (col == csv::Table::npos) {  // derived cr_line_month
        record.credit_worthiness.cr_line_month = derived_cr_line_month(row);
        continue;
      }
      const std::string& cell = row[col];
      if (missing(cell)) continue;
      if (feature->kind == FeatureKind::numeric) {
        auto value = parse_numeric_cell(cell, feature->name);
        if (!value) {
          throw RowError{"unparseable numeric cell '" + cell + "' in column " +
                         feature->name};
        }
        feature->set(record, FeatureValue::of(*value));
      } else {
        feature->set(record, FeatureValue::of(textio::trim(cell)));
      }
    }
    return record;
  }

  double require_number(const std::vector<std::string>& row, std::size_t col,
                        const std::string& what) const {
    const std::string& cell = row[col];
    if (missing(cell)) throw RowError{"missing " + what};
    auto value = parse_numeric_cell(cell, what);
    if (!value) throw RowError{"unparseable numeric cell '" + cell + "' in column " + what};
    return *value;
  }

  int parse_months(const std::vector<std::string>& row, double total_payment) const {
    if (months_col_ != csv::Table::npos && !missing(row[months_col_])) {
      auto months = textio::parse_int(textio::trim(row[months_col_]));
      if (!months || *months < 1) {
        throw RowError{"months_elapsed must be a positive integer, got '" +
                       row[months_col_] + "'"};
      }
      return static_cast<int>(*months);
    }
    if (issue_col_ != csv::Table::npos && last_pymnt_col_ != csv::Table::npos &&
        !missing(row[issue_col_]) && !missing(row[last_pymnt_col_])) {
      auto issued = parse_month_index(row[issue_col_]);
      auto last = parse_month_index(row[last_pymnt_col_]);
      if (issued && last && *last > *issued) return *last - *issued;
      if (issued && last) {
        throw RowError{"last payment date does not follow the issue date"};
      }
      throw RowError{"unparseable issue/last-payment dates"};
    }
    // No payment ever made: duration barely matters for the outcome (ARR is
    // zero); use the charge-off delay so the record stays usable.
    if (total_payment == 0.0) return 5;
    throw RowError{"cannot determine months_elapsed"};
  }

  std::optional<double> derived_cr_line_month(
      const std::vector<std::string>& row) const {
    if (missing(row[earliest_cr_col_]) || missing(row[issue_col_])) {
      return std::nullopt;
    }
    auto earliest = parse_month_index(row[earliest_cr_col_]);
    auto issued = parse_month_index(row[issue_col_]);
    if (!earliest || !issued || *issued < *earliest) return std::nullopt;
    return static_cast<double>(*issued - *earliest);
  }

  const csv::Table& table_;
  const ColumnMap& columns_;
  ArrCap cap_;
  std::size_t id_col_ = 0;
  std::size_t state_col_ = 0;
  std::size_t payment_col_ = 0;
  std::size_t principal_col_ = 0;
  std::size_t months_col_ = csv::Table::npos;
  std::size_t issue_col_ = csv::Table::npos;
  std::size_t last_pymnt_col_ = csv::Table::npos;
  std::size_t earliest_cr_col_ = csv::Table::npos;
  std::vector<std::pair<const FeatureAccessor*, std::size_t>> feature_cols_;
};

}  // namespace

LoadResult load_csv(const std::string& path, const ColumnMap& columns,
                    const ArrCap& cap) {
  csv::Table table = csv::read_file(path);
  if (table.header.empty()) throw SchemaError("CSV has no header row: " + path);
  return CsvLoader(table, columns, cap).run();
}

LoadResult load_csv_text(std::string_view text, const ColumnMap& columns,
                         const ArrCap& cap) {
  csv::Table table = csv::parse(text);
  if (table.header.empty()) throw SchemaError("CSV has no header row");
  return CsvLoader(table, columns, cap).run();
}

void write_rejects_csv(std::ostream& out, std::span<const RejectedRow> rejects) {
  out << "loan_id,reason\n";
  for (const auto& reject : rejects) {
    std::vector<std::string> fields = {reject.loan_id, reject.reason};
    csv::write_row(out, fields);
  }
}

void write_table_csv(std::ostream& out, const LoanTable& table) {
  std::vector<std::string> header = {"id"};
  for (const auto& feature : predictor_features()) header.push_back(feature.name);
  header.insert(header.end(), {"loan_status", "total_pymnt", "funded_amnt",
                               "last_pymnt_months_since_issue"});
  csv::write_row(out, header);

  std::vector<std::string> fields;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const LoanRecord& record = table.records[i];
    fields.clear();
    fields.push_back(std::to_string(record.loan_id));
    for (const auto& feature : predictor_features()) {
      FeatureValue value = feature.get(record);
      switch (value.state) {
        case FeatureValue::State::missing: fields.emplace_back(); break;
        case FeatureValue::State::number:
          fields.push_back(textio::format_double(value.number));
          break;
        case FeatureValue::State::category: fields.push_back(value.category); break;
      }
    }
    fields.push_back(record.raw_state == RawState::charged_off ? "Charged Off"
                                                               : "Fully Paid");
    fields.push_back(textio::format_double(record.total_payment));
    fields.push_back(textio::format_double(record.principal));
    fields.push_back(std::to_string(record.months_elapsed));
    csv::write_row(out, fields);
  }
}

std::vector<std::string> prune_sparse_features(const LoanTable& table,
                                               double max_missing_fraction) {
  if (table.empty()) {
    throw InvalidArgumentError("prune_sparse_features: table is empty");
  }
  std::vector<std::string> retained;
  const double n = static_cast<double>(table.size());
  for (const auto& feature : predictor_features()) {
    std::size_t missing = 0;
    for (const auto& record : table.records) {
      if (feature.get(record).is_missing()) ++missing;
    }
    if (static_cast<double>(missing) / n <= max_missing_fraction) {
      retained.push_back(feature.name);
    }
  }
  return retained;
}

std::pair<std::size_t, std::size_t> split_sizes(std::size_t n,
                                                double train_fraction) {
  if (n < 2) throw InvalidArgumentError("split: need at least 2 records");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgumentError("split: train_fraction must be in (0, 1)");
  }
  auto train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * train_fraction));
  train = std::clamp<std::size_t>(train, 1, n - 1);
  return {train, n - train};
}

std::pair<LoanTable, LoanTable> split(const LoanTable& table,
                                      const SplitSpec& spec) {
  const std::size_t n = table.size();
  const auto [train_size, test_size] = split_sizes(n, spec.train_fraction);
  (void)test_size;

  std::vector<std::uint32_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<std::uint32_t> train_rows(order.begin(), order.begin() + train_size);
  std::vector<std::uint32_t> test_rows(order.begin() + train_size, order.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {table.take(train_rows), table.take(test_rows)};
}

}  // namespace arrkit
