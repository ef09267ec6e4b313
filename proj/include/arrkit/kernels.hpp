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
#include <span>

namespace arrkit::kernels {

// Arithmetic inner loops shared by the preprocessing and boosting code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant selected at runtime. The variants are required to be
// bit-identical to the reference: elementwise kernels perform the same
// IEEE operations per element, and reductions follow a fixed 4-lane
// striped order that both backends implement literally. The equivalence
// suite asserts exact equality, so model training gives the same bits no
// matter which backend is active.

enum class Backend { scalar, avx2 };

const char* backend_name(Backend backend);
bool backend_supported(Backend backend);

/// Backend currently in use. Defaults to the best supported one, or to the
/// ARRKIT_KERNEL_BACKEND environment variable ("scalar" / "avx2") if set.
Backend active_backend();

/// Forces a specific backend; throws ConfigError when this CPU cannot run it.
void force_backend(Backend backend);

/// Reverts to automatic detection.
void reset_backend();

// ---- elementwise kernels -------------------------------------------------

/// dst[i] = clamp((src[i] - lo) / (hi - lo), 0, 1); all zeros when lo == hi.
/// Inputs must be finite.
void scale_clamp01(std::span<const double> src, double lo, double hi,
                   std::span<double> dst);

/// dst[i] = a[i] - b[i]. dst may alias a (used for histogram subtraction).
void subtract(std::span<const double> a, std::span<const double> b,
              std::span<double> dst);

/// dst[i] += src[i].
void add_inplace(std::span<double> dst, std::span<const double> src);

// ---- reductions (fixed 4-lane striped order) ------------------------------

/// Sum with four stride-4 accumulators combined as (l0 + l1) + (l2 + l3),
/// remainder added last in index order.
double sum(std::span<const double> values);

/// Same striping over (a[i] - b[i])^2.
double sum_squared_diff(std::span<const double> a, std::span<const double> b);

// ---- boosting-specific kernels --------------------------------------------

/// Gradient/hessian of squared loss: grad = raw - target, hess = 1.
void squared_grad_hess(std::span<const double> raw,
                       std::span<const double> target, std::span<double> grad,
                       std::span<double> hess);

/// Gradient/hessian of logistic loss on raw scores: p = sigmoid(raw),
/// grad = p - target, hess = p * (1 - p). Scalar on every backend (libm
/// exp does not vectorize bit-identically).
void logistic_grad_hess(std::span<const double> raw,
                        std::span<const double> target, std::span<double> grad,
                        std::span<double> hess);

/// out[i] = 1 / (1 + exp(-raw[i])). Scalar on every backend.
void sigmoid(std::span<const double> raw, std::span<double> out);

/// Accumulates (grad, hess, count) triples into a per-bin histogram.
/// hist is laid out [bin * 3 + 0] = sum_grad, +1 = sum_hess, +2 = count.
/// Rows are visited in the order given, so the accumulation order -- and
/// therefore the result -- is identical on every backend.
void hist_accumulate(std::span<double> hist, std::span<const std::uint8_t> bins,
                     std::span<const double> grad, std::span<const double> hess,
                     std::span<const std::uint32_t> rows);

/// Split gains for every candidate bin of one feature, from prefix sums of
/// the left side. For candidate b:
///   gain = GL^2/(HL+lambda) + GR^2/(HR+lambda) - parent_term
/// with GR = parent_grad - GL etc. Candidates whose left or right side has
/// fewer than min_count rows, or a zero regularized hessian, get -inf.
void split_gains(std::span<const double> left_grad,
                 std::span<const double> left_hess,
                 std::span<const double> left_count, double parent_grad,
                 double parent_hess, double parent_count, double lambda,
                 double min_count, double parent_term, std::span<double> gains);

}  // namespace arrkit::kernels
