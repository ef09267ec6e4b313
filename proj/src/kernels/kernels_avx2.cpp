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

// AVX2 variants. Each kernel performs exactly the operations of the scalar
// reference, element for element and in the same order, so results are
// bit-identical. No FMA: mul followed by add rounds twice in the reference,
// and the vector code must round the same way.

#include "kernels_detail.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <limits>

namespace arrkit::kernels::detail {

namespace {

void scale_clamp01_impl(const double* src, std::size_t n, double lo, double hi,
                        double* dst) {
  if (lo == hi) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
    return;
  }
  const double range = hi - lo;
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vrange = _mm256_set1_pd(range);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vone = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d t = _mm256_div_pd(_mm256_sub_pd(_mm256_loadu_pd(src + i), vlo), vrange);
    t = _mm256_max_pd(t, vzero);
    t = _mm256_min_pd(t, vone);
    _mm256_storeu_pd(dst + i, t);
  }
  for (; i < n; ++i) {
    double t = (src[i] - lo) / range;
    t = t > 0.0 ? t : 0.0;
    t = t < 1.0 ? t : 1.0;
    dst[i] = t;
  }
}

void subtract_impl(const double* a, const double* b, std::size_t n, double* dst) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i,
                     _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void add_inplace_impl(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(dst + i,
                     _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i)));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

double combine_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_impl(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = combine_lanes(acc);
  for (std::size_t i = body; i < n; ++i) total += x[i];
  return total;
}

double sum_squared_diff_impl(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = combine_lanes(acc);
  for (std::size_t i = body; i < n; ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void squared_grad_hess_impl(const double* raw, const double* target,
                            std::size_t n, double* grad, double* hess) {
  const __m256d vone = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(grad + i, _mm256_sub_pd(_mm256_loadu_pd(raw + i),
                                             _mm256_loadu_pd(target + i)));
    _mm256_storeu_pd(hess + i, vone);
  }
  for (; i < n; ++i) {
    grad[i] = raw[i] - target[i];
    hess[i] = 1.0;
  }
}

// Gathers grad/hess for four rows at a time; the per-bin additions stay in
// row order (lane 0 first), which keeps the result equal to the reference.
void hist_accumulate_impl(double* hist, const std::uint8_t* bins,
                          const double* grad, const double* hess,
                          const std::uint32_t* rows, std::size_t n) {
  std::size_t i = 0;
  alignas(32) double gbuf[4];
  alignas(32) double hbuf[4];
  for (; i + 4 <= n; i += 4) {
    __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rows + i));
    _mm256_store_pd(gbuf, _mm256_i32gather_pd(grad, idx, 8));
    _mm256_store_pd(hbuf, _mm256_i32gather_pd(hess, idx, 8));
    for (int k = 0; k < 4; ++k) {
      std::size_t slot = static_cast<std::size_t>(bins[rows[i + k]]) * 3;
      hist[slot] += gbuf[k];
      hist[slot + 1] += hbuf[k];
      hist[slot + 2] += 1.0;
    }
  }
  for (; i < n; ++i) {
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
  const __m256d vpg = _mm256_set1_pd(parent_grad);
  const __m256d vph = _mm256_set1_pd(parent_hess);
  const __m256d vpc = _mm256_set1_pd(parent_count);
  const __m256d vlambda = _mm256_set1_pd(lambda);
  const __m256d vminc = _mm256_set1_pd(min_count);
  const __m256d vparent = _mm256_set1_pd(parent_term);
  const __m256d vinvalid = _mm256_set1_pd(kInvalid);
  const __m256d vzero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vgl = _mm256_loadu_pd(gl + i);
    __m256d vhl = _mm256_loadu_pd(hl + i);
    __m256d vcl = _mm256_loadu_pd(cl + i);
    __m256d vgr = _mm256_sub_pd(vpg, vgl);
    __m256d vhr = _mm256_sub_pd(vph, vhl);
    __m256d vcr = _mm256_sub_pd(vpc, vcl);
    __m256d hl_reg = _mm256_add_pd(vhl, vlambda);
    __m256d hr_reg = _mm256_add_pd(vhr, vlambda);
    __m256d gain = _mm256_sub_pd(
        _mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(vgl, vgl), hl_reg),
                      _mm256_div_pd(_mm256_mul_pd(vgr, vgr), hr_reg)),
        vparent);
    __m256d valid = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(vcl, vminc, _CMP_GE_OQ),
                      _mm256_cmp_pd(vcr, vminc, _CMP_GE_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(hl_reg, vzero, _CMP_NEQ_UQ),
                      _mm256_cmp_pd(hr_reg, vzero, _CMP_NEQ_UQ)));
    _mm256_storeu_pd(gains + i, _mm256_blendv_pd(vinvalid, gain, valid));
  }
  for (; i < n; ++i) {
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

const Ops* avx2_ops() {
  static const Ops ops = {
      scale_clamp01_impl, subtract_impl,          add_inplace_impl,
      sum_impl,           sum_squared_diff_impl,  squared_grad_hess_impl,
      hist_accumulate_impl, split_gains_impl,
  };
  return &ops;
}

}  // namespace arrkit::kernels::detail

#else

namespace arrkit::kernels::detail {

const Ops* avx2_ops() { return nullptr; }

}  // namespace arrkit::kernels::detail

#endif  // __x86_64__ && __AVX2__
