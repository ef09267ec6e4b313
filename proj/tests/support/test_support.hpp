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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arrkit/dataset.hpp"
#include "arrkit/loan.hpp"

namespace arrkit::test {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("arrkit_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::string full = file(name);
    std::ofstream out(full, std::ios::binary);
    out << content;
    return full;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(file(name), std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  }

 private:
  std::filesystem::path path_;
};

/// Minimal fully-populated record for table fixtures.
inline LoanRecord make_record(std::uint64_t id, RawState state,
                              double total_payment, double principal,
                              int months, const std::string& grade = "C") {
  LoanRecord record;
  record.loan_id = id;
  record.raw_state = state;
  record.total_payment = total_payment;
  record.principal = principal;
  record.months_elapsed = months;
  auto& lc = record.loan_characteristics;
  lc.application_type = "Individual";
  lc.dti = 18.0;
  lc.grade = grade;
  lc.initial_list_status = "w";
  lc.installment = 330.0;
  lc.loan_amnt = principal;
  lc.purpose = "credit_card";
  lc.sub_grade = grade + "3";
  lc.term = "36 months";
  lc.verification_status = "Verified";
  auto& cw = record.credit_worthiness;
  cw.acc_now_delinq = 0;
  cw.deling_2yrs = 0;
  cw.cr_line_month = 120;
  cw.fico_range_high = 704;
  cw.fico_range_low = 700;
  cw.inq_last_6mths = 1;
  cw.open_acc = 9;
  cw.pub_rec = 0;
  cw.revol_bal = 8000;
  cw.revol_util = 40.0;
  cw.total_acc = 20;
  auto& bi = record.borrower_info;
  bi.addr_state = "CA";
  bi.annual_inc = 65000;
  bi.emp_length = 5;
  bi.emp_title = "Analyst";
  bi.home_ownership = "RENT";
  bi.zip_code = "941xx";
  return record;
}

inline LoanTable make_table(std::vector<LoanRecord> records,
                            const ArrCap& cap = ArrCap{}) {
  LoanTable table;
  for (auto& record : records) {
    table.outcomes.push_back(derive_outcome(record, cap));
    table.records.push_back(std::move(record));
  }
  return table;
}

/// Mann-Whitney AUC with average ranks for ties; the rank-statistic oracle
/// used against the stage-1 classifier.
inline double auc_oracle(std::span<const double> scores,
                         std::span<const int> labels) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<double> rank(scores.size(), 0.0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]] == scores[order[i]]) {
      ++j;
    }
    double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = avg_rank;
    i = j + 1;
  }
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (labels[t] == 1) {
      positive_rank_sum += rank[t];
      ++n_pos;
    }
  }
  std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return 0.5;
  double u = positive_rank_sum -
             static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

}  // namespace arrkit::test
