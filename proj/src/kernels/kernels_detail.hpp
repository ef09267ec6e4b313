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

#include <cstddef>
#include <cstdint>

namespace arrkit::kernels::detail {

// Raw-pointer vtable filled in by each backend translation unit.
struct Ops {
  void (*scale_clamp01)(const double* src, std::size_t n, double lo, double hi,
                        double* dst);
  void (*subtract)(const double* a, const double* b, std::size_t n, double* dst);
  void (*add_inplace)(double* dst, const double* src, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*sum_squared_diff)(const double* a, const double* b, std::size_t n);
  void (*squared_grad_hess)(const double* raw, const double* target,
                            std::size_t n, double* grad, double* hess);
  void (*hist_accumulate)(double* hist, const std::uint8_t* bins,
                          const double* grad, const double* hess,
                          const std::uint32_t* rows, std::size_t n);
  void (*split_gains)(const double* gl, const double* hl, const double* cl,
                      std::size_t n, double parent_grad, double parent_hess,
                      double parent_count, double lambda, double min_count,
                      double parent_term, double* gains);
};

const Ops& scalar_ops();

// Null when the binary was built without AVX2 support.
const Ops* avx2_ops();

}  // namespace arrkit::kernels::detail
