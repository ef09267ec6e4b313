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

#include "arrkit/features.hpp"

#include <array>

namespace arrkit {

namespace {

FeatureValue from_num(const std::optional<double>& v) {
  return v ? FeatureValue::of(*v) : FeatureValue::missing();
}

FeatureValue from_cat(const std::optional<std::string>& v) {
  return v ? FeatureValue::of(*v) : FeatureValue::missing();
}

void to_num(std::optional<double>& slot, const FeatureValue& v) {
  slot = v.state == FeatureValue::State::number ? std::optional<double>(v.number)
                                                : std::nullopt;
}

void to_cat(std::optional<std::string>& slot, const FeatureValue& v) {
  slot = v.state == FeatureValue::State::category
             ? std::optional<std::string>(v.category)
             : std::nullopt;
}

#define NUMERIC_FEATURE(name, path)                                          \
  FeatureAccessor {                                                           \
    #name, FeatureKind::numeric,                                              \
        [](const LoanRecord& r) { return from_num(r.path.name); },            \
        [](LoanRecord& r, const FeatureValue& v) { to_num(r.path.name, v); }  \
  }

#define CATEGORICAL_FEATURE(name, path)                                      \
  FeatureAccessor {                                                           \
    #name, FeatureKind::categorical,                                          \
        [](const LoanRecord& r) { return from_cat(r.path.name); },            \
        [](LoanRecord& r, const FeatureValue& v) { to_cat(r.path.name, v); }  \
  }

const std::array<FeatureAccessor, 27> kFeatures = {{
    // Loan characteristics
    CATEGORICAL_FEATURE(application_type, loan_characteristics),
    NUMERIC_FEATURE(dti, loan_characteristics),
    CATEGORICAL_FEATURE(grade, loan_characteristics),
    CATEGORICAL_FEATURE(initial_list_status, loan_characteristics),
    NUMERIC_FEATURE(installment, loan_characteristics),
    NUMERIC_FEATURE(loan_amnt, loan_characteristics),
    CATEGORICAL_FEATURE(purpose, loan_characteristics),
    CATEGORICAL_FEATURE(sub_grade, loan_characteristics),
    CATEGORICAL_FEATURE(term, loan_characteristics),
    CATEGORICAL_FEATURE(verification_status, loan_characteristics),
    // Credit worthiness
    NUMERIC_FEATURE(acc_now_delinq, credit_worthiness),
    NUMERIC_FEATURE(deling_2yrs, credit_worthiness),
    NUMERIC_FEATURE(cr_line_month, credit_worthiness),
    NUMERIC_FEATURE(fico_range_high, credit_worthiness),
    NUMERIC_FEATURE(fico_range_low, credit_worthiness),
    NUMERIC_FEATURE(inq_last_6mths, credit_worthiness),
    NUMERIC_FEATURE(open_acc, credit_worthiness),
    NUMERIC_FEATURE(pub_rec, credit_worthiness),
    NUMERIC_FEATURE(revol_bal, credit_worthiness),
    NUMERIC_FEATURE(revol_util, credit_worthiness),
    NUMERIC_FEATURE(total_acc, credit_worthiness),
    // Borrower information
    CATEGORICAL_FEATURE(addr_state, borrower_info),
    NUMERIC_FEATURE(annual_inc, borrower_info),
    NUMERIC_FEATURE(emp_length, borrower_info),
    CATEGORICAL_FEATURE(emp_title, borrower_info),
    CATEGORICAL_FEATURE(home_ownership, borrower_info),
    CATEGORICAL_FEATURE(zip_code, borrower_info),
}};

#undef NUMERIC_FEATURE
#undef CATEGORICAL_FEATURE

}  // namespace

std::span<const FeatureAccessor> predictor_features() { return kFeatures; }

const FeatureAccessor* find_feature(const std::string& name) {
  for (const auto& f : kFeatures) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<std::string> predictor_feature_names() {
  std::vector<std::string> names;
  names.reserve(kFeatures.size());
  for (const auto& f : kFeatures) names.push_back(f.name);
  return names;
}

}  // namespace arrkit
