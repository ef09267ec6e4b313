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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "arrkit/dataset.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/features.hpp"
#include "support/test_support.hpp"

using namespace arrkit;

namespace {

// Canonical-schema CSV with constant predictors; rows supply
// (id, state label, total payment, principal, months).
std::string fixture_csv(const std::vector<std::array<std::string, 5>>& rows) {
  std::ostringstream out;
  out << "id,loan_status,total_pymnt,funded_amnt,last_pymnt_months_since_issue";
  for (const auto& feature : predictor_features()) out << ',' << feature.name;
  out << '\n';
  for (const auto& row : rows) {
    out << row[0] << ',' << row[1] << ',' << row[2] << ',' << row[3] << ','
        << row[4];
    out << ",Individual,18.5,C,w,330.5,10000,credit_card,C3,36 months,Verified";
    out << ",0,0,120,704,700,1,9,0,8000,40.2,21";
    out << ",CA,65000,5,Analyst,RENT,941xx";
    out << '\n';
  }
  return out.str();
}

const ColumnMap kDefaultMap = ColumnMap::defaults();

}  // namespace

TEST_CASE("load_csv drops intermediate loans and derives outcomes") {
  auto result = load_csv_text(
      fixture_csv({{"1", "Fully Paid", "12000", "10000", "36"},
                   {"2", "Charged Off", "2000", "10000", "10"},
                   {"3", "Current", "5000", "10000", "12"},
                   {"4", "Fully Paid", "11000", "10000", "30"},
                   {"5", "Fully Paid", "10500", "10000", "20"}}),
      kDefaultMap);
  CHECK(result.table.size() == 4);
  CHECK(result.report.dropped_intermediate == 1);
  CHECK(result.report.rejects.empty());
  CHECK(result.report.rows_seen == 5);
  for (const auto& record : result.table.records) {
    CHECK(record.raw_state != RawState::intermediate);
  }
}

TEST_CASE("load_csv derives both targets") {
  auto result = load_csv_text(
      fixture_csv({{"1", "Fully Paid", "12000", "10000", "36"},
                   {"2", "Fully Paid", "11000", "10000", "24"}}),
      kDefaultMap);
  for (const auto& outcome : result.table.outcomes) CHECK(outcome.loan_status == 0);

  // the 16-month early-repayment example
  result = load_csv_text(
      fixture_csv({{"7", "Fully Paid", "7003", "6000", "16"}}), kDefaultMap);
  REQUIRE(result.table.size() == 1);
  CHECK(result.table.outcomes[0].arr ==
        doctest::Approx(1.12).epsilon(0.005 / 1.12));
}

TEST_CASE("load_csv reports schema errors by column") {
  std::string csv = fixture_csv({{"1", "Fully Paid", "12000", "10000", "36"}});
  // strip the funded_amnt column from the header so resolution fails
  auto pos = csv.find("funded_amnt");
  csv.replace(pos, std::string("funded_amnt").size(), "renamed_away");
  CHECK_THROWS_WITH_AS(load_csv_text(csv, kDefaultMap),
                       doctest::Contains("funded_amnt"), SchemaError);
}

TEST_CASE("load_csv rejects malformed rows but keeps the rest") {
  auto csv = fixture_csv({{"1", "Fully Paid", "12000", "10000", "36"},
                          {"2", "Fully Paid", "not-a-number", "10000", "36"},
                          {"2", "Fully Paid", "12000", "10000", "36"},  // dup id
                          {"3", "Fully Paid", "12000", "-1", "36"},
                          {"4", "Fully Paid", "12000", "10000", "0"},
                          {"5", "Charged Off", "500", "10000", "8"}});
  auto result = load_csv_text(csv, kDefaultMap);
  CHECK(result.table.size() == 3);  // rows 1, first 2, 5
  REQUIRE(result.report.rejects.size() == 3);
  CHECK(result.report.rejects[0].reason.find("total_pymnt") != std::string::npos);
  CHECK(result.report.rejects[1].reason.find("duplicate") != std::string::npos);
  CHECK(result.report.rejects[2].reason.find("principal") != std::string::npos);

  std::ostringstream rejects;
  write_rejects_csv(rejects, result.report.rejects);
  CHECK(rejects.str().find("loan_id,reason") == 0);
}

TEST_CASE("load_csv understands the Lending Club export dialect") {
  std::ostringstream out;
  out << "id,loan_status,total_pymnt,funded_amnt,issue_d,last_pymnt_d,"
         "earliest_cr_line,application_type,dti,grade,initial_list_status,"
         "installment,loan_amnt,purpose,sub_grade,term,verification_status,"
         "acc_now_delinq,delinq_2yrs,fico_range_high,fico_range_low,"
         "inq_last_6mths,open_acc,pub_rec,revol_bal,revol_util,total_acc,"
         "addr_state,annual_inc,emp_length,emp_title,home_ownership,zip_code\n";
  out << "77,Fully Paid,7003,6000,Jan-2015,May-2016,Aug-2001,Individual,18.5,C,"
         "w,207.98,6000,credit_card,C3, 36 months,Source Verified,0,1,704,700,"
         "1,9,0,8000,45.3%,21,CA,65000,10+ years,Teacher,RENT,941xx\n";
  out << "78,Charged Off,900,6000,Jan-2015,Jun-2015,Aug-2001,Individual,18.5,D,"
         "w,207.98,6000,credit_card,D1, 36 months,Not Verified,0,1,684,680,1,9,"
         "0,8000,NA,21,CA,42000,< 1 year,,RENT,941xx\n";
  auto result = load_csv_text(out.str(), kDefaultMap);
  REQUIRE(result.table.size() == 2);

  const LoanRecord& paid = result.table.records[0];
  CHECK(paid.months_elapsed == 16);  // Jan-2015 .. May-2016
  CHECK(paid.credit_worthiness.deling_2yrs == 1.0);      // delinq_2yrs alias
  CHECK(paid.credit_worthiness.cr_line_month == 161.0);  // Aug-2001 .. Jan-2015
  CHECK(paid.credit_worthiness.revol_util == doctest::Approx(45.3));
  CHECK(paid.borrower_info.emp_length == 10.0);
  CHECK(paid.loan_characteristics.term == "36 months");  // trimmed
  CHECK(result.table.outcomes[0].arr == doctest::Approx(1.12).epsilon(0.005));

  const LoanRecord& defaulted = result.table.records[1];
  CHECK(defaulted.months_elapsed == 5);  // Jan-2015 .. Jun-2015
  CHECK(defaulted.borrower_info.emp_length == 0.0);
  CHECK(!defaulted.credit_worthiness.revol_util.has_value());
  CHECK(!defaulted.borrower_info.emp_title.has_value());
}

TEST_CASE("rows with payments but no duration are rejected; zero-payment rows pass") {
  std::ostringstream out;
  out << "id,loan_status,total_pymnt,funded_amnt";
  for (const auto& feature : predictor_features()) out << ',' << feature.name;
  out << ",issue_d,last_pymnt_d\n";
  auto row = [&](const char* id, const char* pay, const char* last) {
    out << id << ",Charged Off," << pay << ",10000";
    out << ",Individual,18.5,C,w,330.5,10000,credit_card,C3,36 months,Verified";
    out << ",0,0,120,704,700,1,9,0,8000,40.2,21,CA,65000,5,Analyst,RENT,941xx";
    out << ",Jan-2016," << last << '\n';
  };
  row("1", "0", "");    // never paid: synthetic charge-off duration
  row("2", "500", "");  // paid something, no last payment date: reject
  auto result = load_csv_text(out.str(), kDefaultMap);
  CHECK(result.table.size() == 1);
  CHECK(result.table.records[0].months_elapsed == 5);
  REQUIRE(result.report.rejects.size() == 1);
  CHECK(result.report.rejects[0].loan_id == "2");
}

TEST_CASE("write_table_csv round-trips through load_csv") {
  LoanTable table = generate_synthetic(200, 31);
  std::ostringstream out;
  write_table_csv(out, table);
  auto reloaded = load_csv_text(out.str(), kDefaultMap);
  CHECK(reloaded.report.rejects.empty());
  REQUIRE(reloaded.table.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(reloaded.table.records[i].loan_id == table.records[i].loan_id);
    CHECK(reloaded.table.outcomes[i].loan_status == table.outcomes[i].loan_status);
    CHECK(reloaded.table.outcomes[i].arr ==
          doctest::Approx(table.outcomes[i].arr).epsilon(1e-12));
    for (const auto& feature : predictor_features()) {
      FeatureValue original = feature.get(table.records[i]);
      FeatureValue round = feature.get(reloaded.table.records[i]);
      CHECK(original.is_missing() == round.is_missing());
      if (original.state == FeatureValue::State::category) {
        CHECK(original.category == round.category);
      }
      if (original.state == FeatureValue::State::number) {
        CHECK(original.number == round.number);  // exact decimal round trip
      }
    }
  }
}

TEST_CASE("prune_sparse_features uses a strict threshold") {
  std::vector<LoanRecord> records;
  for (int i = 0; i < 100; ++i) {
    auto record = test::make_record(static_cast<std::uint64_t>(i + 1),
                                    RawState::fully_paid, 12000.0, 10000.0, 36);
    if (i < 71) record.loan_characteristics.dti.reset();      // 71% missing
    if (i < 70) record.credit_worthiness.revol_util.reset();  // 70% missing
    records.push_back(std::move(record));
  }
  auto retained = prune_sparse_features(test::make_table(std::move(records)), 0.7);
  auto has = [&](const char* name) {
    return std::find(retained.begin(), retained.end(), name) != retained.end();
  };
  CHECK(!has("dti"));        // strictly above the threshold: dropped
  CHECK(has("revol_util"));  // exactly at the threshold: retained
  CHECK(retained.size() == 26);

  auto full = test::make_table(
      {test::make_record(1, RawState::fully_paid, 12000.0, 10000.0, 36)});
  CHECK(prune_sparse_features(full).size() == 27);
  CHECK_THROWS_AS(prune_sparse_features(LoanTable{}), InvalidArgumentError);
}

TEST_CASE("split sizes follow floor(n * fraction)") {
  CHECK(split_sizes(10, 0.7) == std::pair<std::size_t, std::size_t>{7, 3});
  // the full-scale 70/30 partition counts
  CHECK(split_sizes(1123895, 0.7) ==
        std::pair<std::size_t, std::size_t>{786726, 337169});
  CHECK(split_sizes(3, 0.01).first == 1);  // clamped: both sides non-empty
  CHECK(split_sizes(3, 0.999).first == 2);
  CHECK_THROWS_AS(split_sizes(1, 0.7), InvalidArgumentError);
  CHECK_THROWS_AS(split_sizes(10, 1.0), InvalidArgumentError);
}

TEST_CASE("split is a deterministic disjoint partition") {
  LoanTable table = generate_synthetic(103, 5);
  SplitSpec spec{0.7, 42};
  auto [train_a, test_a] = split(table, spec);
  auto [train_b, test_b] = split(table, spec);
  CHECK(train_a.size() == 72);  // floor(0.7 * 103)
  CHECK(test_a.size() == 31);

  auto ids = [](const LoanTable& t) {
    std::set<std::uint64_t> out;
    for (const auto& r : t.records) out.insert(r.loan_id);
    return out;
  };
  auto train_ids = ids(train_a);
  auto test_ids = ids(test_a);
  CHECK(train_ids == ids(train_b));
  CHECK(test_ids == ids(test_b));

  std::set<std::uint64_t> all = train_ids;
  all.insert(test_ids.begin(), test_ids.end());
  CHECK(all.size() == table.size());
  CHECK(all == ids(table));
  for (auto id : test_ids) CHECK(!train_ids.count(id));

  auto [train_c, test_c] = split(table, SplitSpec{0.7, 43});
  CHECK(ids(train_c) != train_ids);  // a different seed reshuffles
}

TEST_CASE("synthetic generator is deterministic and risk-shaped") {
  LoanTable a = generate_synthetic(10000, 77);
  LoanTable b = generate_synthetic(10000, 77);
  std::ostringstream csv_a, csv_b;
  write_table_csv(csv_a, a);
  write_table_csv(csv_b, b);
  CHECK(csv_a.str() == csv_b.str());

  LoanTable c = generate_synthetic(10000, 78);
  std::ostringstream csv_c;
  write_table_csv(csv_c, c);
  CHECK(csv_a.str() != csv_c.str());

  // grade A must default less than grade G
  std::array<std::size_t, 7> count{}, defaults{};
  double paid_arr = 0.0, default_arr = 0.0;
  std::size_t n_paid = 0, n_default = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    int g = (*a.records[i].loan_characteristics.grade)[0] - 'A';
    count[static_cast<std::size_t>(g)] += 1;
    defaults[static_cast<std::size_t>(g)] +=
        static_cast<std::size_t>(a.outcomes[i].loan_status);
    if (a.outcomes[i].loan_status == 0) {
      paid_arr += a.outcomes[i].arr;
      ++n_paid;
    } else {
      default_arr += a.outcomes[i].arr;
      ++n_default;
    }
  }
  REQUIRE(count[0] > 100);
  REQUIRE(count[6] > 20);
  double rate_a = static_cast<double>(defaults[0]) / static_cast<double>(count[0]);
  double rate_g = static_cast<double>(defaults[6]) / static_cast<double>(count[6]);
  CHECK(rate_a < rate_g);

  // overall default mass near the one-in-five target
  double overall = static_cast<double>(n_default) / static_cast<double>(a.size());
  CHECK(overall > 0.1956 - 0.03);
  CHECK(overall < 0.1956 + 0.03);

  // paid loans out-earn defaulted ones on average
  CHECK(paid_arr / static_cast<double>(n_paid) >
        default_arr / static_cast<double>(n_default));

  // ids are unique and dense
  std::set<std::uint64_t> ids;
  for (const auto& r : a.records) ids.insert(r.loan_id);
  CHECK(ids.size() == a.size());
}
