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

// Reference kernels. These define the semantics the SIMD variants must
// reproduce bit for bit; keep the operation order here in sync with
// kernels_avx2.cpp.

#include <limits>

#include "kernels_detail.hpp"

namespace arrkit::kernels::detail {

namespace {

void scale_clamp01_impl(const double* src, std::size_t n, double lo, double hi,
                        double* dst) {
  if (lo == hi) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
    return;
  }
  const double range = hi - lo;
  for (std::size_t i = 0; i < n; ++i) {
    double t = (src[i] - lo) / range;
    t = t > 0.0 ? t : 0.0;
    t = t < 1.0 ? t : 1.0;
    dst[i] = t;
  }
}

void subtract_impl(const double* a, const double* b, std::size_t n, double* dst) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void add_inplace_impl(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

// Four stride-4 accumulators, combined (l0 + l1) + (l2 + l3), then the
// remainder in index order. Mirrors one AVX2 register lane per
// accumulator so both backends round identically.
double sum_impl(const double* x, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < n; ++i) total += x[i];
  return total;
}

double sum_squared_diff_impl(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    double d0 = a[i] - b[i];
    double d1 = a[i + 1] - b[i + 1];
    double d2 = a[i + 2] - b[i + 2];
    double d3 = a[i + 3] - b[i + 3];
    lane[0] += d0 * d0;
    lane[1] += d1 * d1;
    lane[2] += d2 * d2;
    lane[3] += d3 * d3;
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < n; ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void squared_grad_hess_impl(const double* raw, const double* target,
                            std::size_t n, double* grad, double* hess) {
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = raw[i] - target[i];
    hess[i] = 1.0;
  }
}

void hist_accumulate_impl(double* hist, const std::uint8_t* bins,
                          const double* grad, const double* hess,
                          const std::uint32_t* rows, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = rows[i];
    std::size_t slot = static_cast<std::size_t>(bins[r]) * 3;
    hist[slot] += grad[r];
    hist[slot + 1] += hess[r];
    hist[slot + 2] += 1.0;
  }
}

void split_gains_impl(const double* gl, const double* hl, const double* cl,
                      std::size_t n, double parent_grad, double parent_hess,
                      double parent_count, double lambda, double min_count,
                      double parent_term, double* gains) {
  constexpr double kInvalid = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double gr = parent_grad - gl[i];
    double hr = parent_hess - hl[i];
    double cr = parent_count - cl[i];
    double hl_reg = hl[i] + lambda;
    double hr_reg = hr + lambda;
    double gain = (gl[i] * gl[i]) / hl_reg + (gr * gr) / hr_reg - parent_term;
    bool valid = cl[i] >= min_count && cr >= min_count && hl_reg != 0.0 &&
                 hr_reg != 0.0;
    gains[i] = valid ? gain : kInvalid;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      scale_clamp01_impl, subtract_impl,          add_inplace_impl,
      sum_impl,           sum_squared_diff_impl,  squared_grad_hess_impl,
      hist_accumulate_impl, split_gains_impl,
  };
  return ops;
}

}  // namespace arrkit::kernels::detail
