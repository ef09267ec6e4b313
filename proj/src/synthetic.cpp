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

// Synthetic loan book. A latent risk score r drives grade, interest rate
// and default probability; every predictor is a noisy view of r (or pure
// noise). Defaults additionally depend on a handful of observable credit
// red flags, so the classification target carries signal that is cheap to
// learn from loan_status but expensive to recover from the profit target.

#include <algorithm>
#include <cmath>
#include <string>

#include "arrkit/dataset.hpp"
#include "arrkit/errors.hpp"
#include "arrkit/rng.hpp"

namespace arrkit {

namespace {

struct GradeBands {
  // lower/upper r-bound and midpoint of each grade band A..G
  double lo[7], hi[7], mid[7];

  explicit GradeBands(const std::array<double, 6>& cuts) {
    double prev = 0.0;
    for (int g = 0; g < 7; ++g) {
      lo[g] = prev;
      hi[g] = g < 6 ? cuts[g] : 1.0;
      mid[g] = 0.5 * (lo[g] + hi[g]);
      prev = hi[g];
    }
  }

  int grade_of(double r) const {
    for (int g = 0; g < 6; ++g) {
      if (r < hi[g]) return g;
    }
    return 6;
  }

  // Piecewise-linear interpolation between per-grade anchors at band
  // midpoints; flat beyond the outermost midpoints.
  double interp(double r, const std::array<double, 7>& anchors) const {
    if (r <= mid[0]) return anchors[0];
    if (r >= mid[6]) return anchors[6];
    for (int g = 0; g < 6; ++g) {
      if (r <= mid[g + 1]) {
        double t = (r - mid[g]) / (mid[g + 1] - mid[g]);
        return anchors[g] + t * (anchors[g + 1] - anchors[g]);
      }
    }
    return anchors[6];
  }
};

double round_to(double value, double step) {
  if (step < 1.0) {
    // multiply-then-divide lands on the canonical double for the decimal
    double inv = std::round(1.0 / step);
    return std::round(value * inv) / inv;
  }
  return std::round(value / step) * step;
}

// Remaining balance after k of T scheduled payments at monthly rate m.
double amortized_balance(double principal, double monthly_rate, double payment,
                         int k) {
  double factor = std::pow(1.0 + monthly_rate, k);
  double balance = principal * factor - payment * (factor - 1.0) / monthly_rate;
  return std::max(0.0, balance);
}

const char* kPurposes[] = {"debt_consolidation", "credit_card", "home_improvement",
                           "major_purchase",     "medical",     "small_business",
                           "car",                "vacation",    "other"};
const double kPurposeWeights[] = {55, 21, 7, 4, 3, 2, 2, 2, 4};

const char* kStates[] = {"CA", "TX", "NY", "FL", "IL", "NJ", "PA", "OH",
                         "GA", "VA", "NC", "MI", "MA", "MD", "WA"};
const double kStateWeights[] = {13, 8, 8, 7, 5, 4, 4, 4, 4, 3, 3, 3, 3, 2, 2};

const char* kEmpTitles[] = {
    "Teacher",        "Manager",          "Registered Nurse", "Driver",
    "Supervisor",     "Sales",            "Project Manager",  "Owner",
    "Office Manager", "Engineer",         "Accountant",       "Server",
    "Analyst",        "Technician",       "Administrative Assistant",
    "Director",       "Mechanic",         "Sales Manager, Retail",
    "Electrician",    "Vice President",   "Operations Manager",
    "Clerk",          "Police Officer",   "Machine Operator"};

const char* kZipPrefixes[] = {"100xx", "300xx", "606xx", "750xx", "900xx",
                              "941xx", "331xx", "112xx", "207xx", "480xx",
                              "852xx", "191xx", "981xx", "282xx", "432xx",
                              "802xx", "730xx", "640xx", "378xx", "220xx"};

}  // namespace

LoanTable generate_synthetic(std::size_t n, std::uint64_t seed,
                             const SynthConfig& config) {
  if (n < 1) throw InvalidArgumentError("generate_synthetic: n must be >= 1");
  GradeBands bands(config.grade_cuts);
  Rng rng(seed);
  LoanTable table;
  table.records.reserve(n);
  table.outcomes.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    LoanRecord record;
    record.loan_id = i + 1;

    const double r = rng.uniform();
    const int grade = bands.grade_of(r);
    const double band_pos =
        (r - bands.lo[grade]) / (bands.hi[grade] - bands.lo[grade]);
    const int sub = std::min(4, static_cast<int>(band_pos * 5.0));

    double rate = bands.interp(r, config.grade_interest_rate) +
                  0.004 * rng.normal();
    rate = std::clamp(rate, 0.05, 0.32);

    const int term_months = rng.bernoulli(config.sixty_month_fraction) ? 60 : 36;
    const double principal = std::max(1000.0, round_to(rng.uniform_range(1000.0, 40000.0), 25.0));
    const double monthly_rate = rate / 12.0;
    const double installment =
        principal * monthly_rate /
        (1.0 - std::pow(1.0 + monthly_rate, -term_months));

    // Observable credit red flags shift the default probability on top of
    // the grade curve.
    auto& cw = record.credit_worthiness;
    const double fico_low = std::clamp(
        round_to(660.0 + (1.0 - r) * 160.0 + rng.normal(0.0, 18.0), 1.0), 630.0, 845.0);
    const double dti = std::clamp(round_to(4.0 + 28.0 * r + rng.normal(0.0, 6.0), 0.01), 0.0, 55.0);
    const double revol_util =
        std::clamp(round_to(25.0 + 55.0 * r + rng.normal(0.0, 12.0), 0.1), 0.0, 120.0);
    const int inq = rng.poisson(0.4 + 2.2 * r);
    const int delinq2 = rng.poisson(0.25 + 1.6 * r);

    double pd = bands.interp(r, config.grade_default_rate);
    if (dti > 32.0 && revol_util > 65.0) pd += 0.15;
    if (delinq2 >= 2) pd += 0.10;
    if (inq >= 3) pd += 0.08;
    if (fico_low >= 740.0) pd -= 0.05;
    pd = std::clamp(pd, 0.01, 0.90);

    const bool defaulted = rng.bernoulli(pd);
    double total_payment = 0.0;
    int months = 0;
    if (defaulted) {
      int paid_months = static_cast<int>(rng.uniform_int(0, term_months - 5));
      total_payment = installment * paid_months;
      if (rng.bernoulli(config.recovery_fraction)) {
        total_payment += rng.uniform_range(0.0, 0.25) * principal;
      }
      months = paid_months + 5;  // charge-off happens ~150 days past due
    } else {
      int paid_months = term_months;
      if (rng.bernoulli(config.early_payoff_fraction)) {
        paid_months = static_cast<int>(rng.uniform_int(6, term_months));
      }
      total_payment = installment * paid_months +
                      amortized_balance(principal, monthly_rate, installment,
                                        paid_months);
      months = paid_months;
    }
    record.raw_state = defaulted ? RawState::charged_off : RawState::fully_paid;
    record.total_payment = round_to(total_payment, 0.01);
    record.principal = principal;
    record.months_elapsed = months;

    auto& lc = record.loan_characteristics;
    lc.application_type = rng.bernoulli(0.05) ? "Joint App" : "Individual";
    lc.dti = dti;
    lc.grade = std::string(1, static_cast<char>('A' + grade));
    lc.initial_list_status = rng.bernoulli(0.6) ? "w" : "f";
    lc.installment = round_to(installment, 0.01);
    lc.loan_amnt = principal;
    lc.purpose = kPurposes[rng.pick_weighted(kPurposeWeights)];
    lc.sub_grade = *lc.grade + std::to_string(sub + 1);
    lc.term = std::to_string(term_months) + " months";
    {
      const double w[] = {40, 30, 30};
      const char* labels[] = {"Not Verified", "Source Verified", "Verified"};
      lc.verification_status = labels[rng.pick_weighted(w)];
    }

    cw.acc_now_delinq = rng.poisson(0.01 + 0.25 * r);
    cw.deling_2yrs = delinq2;
    cw.cr_line_month =
        std::clamp(round_to(40.0 + 320.0 * (1.0 - r) + rng.normal(0.0, 60.0), 1.0),
                   12.0, 720.0);
    cw.fico_range_high = fico_low + 4.0;
    cw.fico_range_low = fico_low;
    cw.inq_last_6mths = inq;
    cw.open_acc = 3 + rng.poisson(8.0);
    cw.pub_rec = rng.poisson(0.08 + 0.5 * r);
    cw.revol_bal = round_to(std::exp(7.5 + 2.2 * rng.uniform()), 1.0);
    cw.revol_util = revol_util;
    cw.total_acc = *cw.open_acc + rng.poisson(12.0);

    auto& bi = record.borrower_info;
    bi.addr_state = kStates[rng.pick_weighted(kStateWeights)];
    bi.annual_inc =
        round_to(std::clamp(20000.0 + 130000.0 * rng.uniform() * (1.15 - 0.5 * r),
                            12000.0, 300000.0),
                 1.0);
    bi.emp_length = static_cast<double>(rng.uniform_int(0, 10));
    bi.emp_title = kEmpTitles[rng.uniform_below(std::size(kEmpTitles))];
    {
      const double w[] = {47, 40, 11, 2};
      const char* labels[] = {"MORTGAGE", "RENT", "OWN", "OTHER"};
      bi.home_ownership = labels[rng.pick_weighted(w)];
    }
    bi.zip_code = kZipPrefixes[rng.uniform_below(std::size(kZipPrefixes))];

    // Light missingness on predictors that are often absent in the wild.
    if (rng.bernoulli(config.missing_cell_rate)) lc.dti.reset();
    if (rng.bernoulli(config.missing_cell_rate)) cw.revol_util.reset();
    if (rng.bernoulli(2.0 * config.missing_cell_rate)) bi.emp_title.reset();
    if (rng.bernoulli(config.missing_cell_rate)) bi.annual_inc.reset();
    if (rng.bernoulli(config.missing_cell_rate)) cw.cr_line_month.reset();

    table.outcomes.push_back(derive_outcome(record, config.arr_cap));
    table.records.push_back(std::move(record));
  }
  return table;
}

}  // namespace arrkit
