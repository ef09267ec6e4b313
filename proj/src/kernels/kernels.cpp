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

#include "arrkit/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "arrkit/errors.hpp"
#include "kernels_detail.hpp"

namespace arrkit::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("ARRKIT_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2)) {
      return Backend::avx2;
    }
    // Unknown or unsupported request falls back to detection.
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

const detail::Ops& ops() {
  return g_backend.load(std::memory_order_relaxed) == Backend::avx2
             ? *detail::avx2_ops()
             : detail::scalar_ops();
}

void check_equal_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw InvalidArgumentError(std::string(what) + ": size mismatch");
}

}  // namespace

const char* backend_name(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend backend) {
  if (backend == Backend::scalar) return true;
  return detail::avx2_ops() != nullptr && cpu_has_avx2();
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw ConfigError(std::string("kernel backend not supported on this CPU: ") +
                      backend_name(backend));
  }
  g_backend.store(backend, std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(detect_backend(), std::memory_order_relaxed); }

void scale_clamp01(std::span<const double> src, double lo, double hi,
                   std::span<double> dst) {
  check_equal_sizes(src.size(), dst.size(), "scale_clamp01");
  ops().scale_clamp01(src.data(), src.size(), lo, hi, dst.data());
}

void subtract(std::span<const double> a, std::span<const double> b,
              std::span<double> dst) {
  check_equal_sizes(a.size(), b.size(), "subtract");
  check_equal_sizes(a.size(), dst.size(), "subtract");
  ops().subtract(a.data(), b.data(), a.size(), dst.data());
}

void add_inplace(std::span<double> dst, std::span<const double> src) {
  check_equal_sizes(dst.size(), src.size(), "add_inplace");
  ops().add_inplace(dst.data(), src.data(), dst.size());
}

double sum(std::span<const double> values) {
  return ops().sum(values.data(), values.size());
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
  check_equal_sizes(a.size(), b.size(), "sum_squared_diff");
  return ops().sum_squared_diff(a.data(), b.data(), a.size());
}

void squared_grad_hess(std::span<const double> raw,
                       std::span<const double> target, std::span<double> grad,
                       std::span<double> hess) {
  check_equal_sizes(raw.size(), target.size(), "squared_grad_hess");
  check_equal_sizes(raw.size(), grad.size(), "squared_grad_hess");
  check_equal_sizes(raw.size(), hess.size(), "squared_grad_hess");
  ops().squared_grad_hess(raw.data(), target.data(), raw.size(), grad.data(),
                          hess.data());
}

void logistic_grad_hess(std::span<const double> raw,
                        std::span<const double> target, std::span<double> grad,
                        std::span<double> hess) {
  check_equal_sizes(raw.size(), target.size(), "logistic_grad_hess");
  check_equal_sizes(raw.size(), grad.size(), "logistic_grad_hess");
  check_equal_sizes(raw.size(), hess.size(), "logistic_grad_hess");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double p = 1.0 / (1.0 + std::exp(-raw[i]));
    grad[i] = p - target[i];
    hess[i] = p * (1.0 - p);
  }
}

void sigmoid(std::span<const double> raw, std::span<double> out) {
  check_equal_sizes(raw.size(), out.size(), "sigmoid");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = 1.0 / (1.0 + std::exp(-raw[i]));
  }
}

void hist_accumulate(std::span<double> hist, std::span<const std::uint8_t> bins,
                     std::span<const double> grad, std::span<const double> hess,
                     std::span<const std::uint32_t> rows) {
  check_equal_sizes(grad.size(), hess.size(), "hist_accumulate");
  check_equal_sizes(grad.size(), bins.size(), "hist_accumulate");
  if (hist.size() % 3 != 0) {
    throw InvalidArgumentError("hist_accumulate: histogram size not a multiple of 3");
  }
  ops().hist_accumulate(hist.data(), bins.data(), grad.data(), hess.data(),
                        rows.data(), rows.size());
}

void split_gains(std::span<const double> left_grad,
                 std::span<const double> left_hess,
                 std::span<const double> left_count, double parent_grad,
                 double parent_hess, double parent_count, double lambda,
                 double min_count, double parent_term, std::span<double> gains) {
  check_equal_sizes(left_grad.size(), left_hess.size(), "split_gains");
  check_equal_sizes(left_grad.size(), left_count.size(), "split_gains");
  check_equal_sizes(left_grad.size(), gains.size(), "split_gains");
  ops().split_gains(left_grad.data(), left_hess.data(), left_count.data(),
                    left_grad.size(), parent_grad, parent_hess, parent_count,
                    lambda, min_count, parent_term, gains.data());
}

}  // namespace arrkit::kernels
