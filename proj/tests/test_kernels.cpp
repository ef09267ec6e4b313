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

// The SIMD variants must be bit-identical to the scalar reference; every
// equivalence check here is exact, not approximate.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "arrkit/errors.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/rng.hpp"

using namespace arrkit;
namespace k = arrkit::kernels;

namespace {

struct BackendGuard {
  ~BackendGuard() { k::reset_backend(); }
};

bool bits_equal(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) {
      return false;
    }
  }
  return true;
}

const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 33, 100, 257};

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform_range(lo, hi);
  return out;
}

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(k::backend_supported(k::Backend::scalar));
  CHECK(std::string(k::backend_name(k::Backend::scalar)) == "scalar");
  CHECK(std::string(k::backend_name(k::Backend::avx2)) == "avx2");
}

TEST_CASE("forcing an unsupported backend is a config error") {
  if (k::backend_supported(k::Backend::avx2)) return;  // nothing to force-fail
  CHECK_THROWS_AS(k::force_backend(k::Backend::avx2), ConfigError);
}

TEST_CASE("scale_clamp01 semantics") {
  BackendGuard guard;
  std::vector<double> src = {2.0, 4.0, 10.0, 12.0, -1.0};
  std::vector<double> dst(src.size());
  k::scale_clamp01(src, 2.0, 10.0, dst);
  CHECK(dst == std::vector<double>{0.0, 0.25, 1.0, 1.0, 0.0});

  k::scale_clamp01(src, 3.0, 3.0, dst);  // constant feature maps to zero
  CHECK(dst == std::vector<double>{0.0, 0.0, 0.0, 0.0, 0.0});

  Rng rng(3);
  auto values = random_vector(rng, 300, -50.0, 50.0);
  std::vector<double> scaled(values.size());
  k::scale_clamp01(values, -10.0, 20.0, scaled);
  for (double v : scaled) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("reductions match a long-double reference") {
  Rng rng(17);
  for (std::size_t n : kSizes) {
    auto a = random_vector(rng, n, -100.0, 100.0);
    auto b = random_vector(rng, n, -100.0, 100.0);
    long double sum_ref = 0.0L, sse_ref = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      sum_ref += a[i];
      long double d = static_cast<long double>(a[i]) - b[i];
      sse_ref += d * d;
    }
    CHECK(k::sum(a) == doctest::Approx(static_cast<double>(sum_ref)).epsilon(1e-12));
    CHECK(k::sum_squared_diff(a, b) ==
          doctest::Approx(static_cast<double>(sse_ref)).epsilon(1e-12));
  }
}

TEST_CASE("loss kernels match their definitions") {
  std::vector<double> raw = {0.0, 2.0, -3.0};
  std::vector<double> target = {1.0, 0.0, 1.0};
  std::vector<double> grad(3), hess(3);

  k::squared_grad_hess(raw, target, grad, hess);
  CHECK(grad == std::vector<double>{-1.0, 2.0, -4.0});
  CHECK(hess == std::vector<double>{1.0, 1.0, 1.0});

  k::logistic_grad_hess(raw, target, grad, hess);
  CHECK(grad[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(hess[0] == doctest::Approx(0.25).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(hess[i] > 0.0);
    CHECK(hess[i] <= 0.25);
  }

  std::vector<double> probs(3);
  k::sigmoid(raw, probs);
  CHECK(probs[0] == doctest::Approx(0.5));
  for (double p : probs) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("split_gains masks invalid candidates") {
  // one feature, 3 bins: prefix stats for candidates b=0,1
  std::vector<double> gl = {-2.0, -1.0};
  std::vector<double> hl = {2.0, 3.0};
  std::vector<double> cl = {2.0, 3.0};
  std::vector<double> gains(2);
  // parent: G=0, H=4, C=4
  double parent_term = 0.0;
  k::split_gains(gl, hl, cl, 0.0, 4.0, 4.0, 0.0, 1.0, parent_term, gains);
  CHECK(gains[0] == doctest::Approx(2.0 + 2.0));  // 4/2 + 4/2
  CHECK(gains[1] == doctest::Approx(1.0 / 3.0 + 1.0));

  // min_count = 3 kills candidate 0 (left side has only 2 rows)
  k::split_gains(gl, hl, cl, 0.0, 4.0, 4.0, 0.0, 3.0, parent_term, gains);
  CHECK(gains[0] == -std::numeric_limits<double>::infinity());
  CHECK(gains[1] == -std::numeric_limits<double>::infinity());  // right has 1
}

TEST_CASE("avx2 variants are bit-identical to the scalar reference") {
  if (!k::backend_supported(k::Backend::avx2)) {
    MESSAGE("AVX2 not available; equivalence suite skipped");
    return;
  }
  BackendGuard guard;
  Rng rng(20260810);

  for (std::size_t n : kSizes) {
    auto a = random_vector(rng, n, -1000.0, 1000.0);
    auto b = random_vector(rng, n, -1000.0, 1000.0);

    std::vector<double> scalar_out(n), avx_out(n);
    double scalar_sum, avx_sum, scalar_sse, avx_sse;

    k::force_backend(k::Backend::scalar);
    k::scale_clamp01(a, -250.0, 330.0, scalar_out);
    scalar_sum = k::sum(a);
    scalar_sse = k::sum_squared_diff(a, b);
    k::force_backend(k::Backend::avx2);
    k::scale_clamp01(a, -250.0, 330.0, avx_out);
    avx_sum = k::sum(a);
    avx_sse = k::sum_squared_diff(a, b);
    CHECK(bits_equal(scalar_out, avx_out));
    CHECK(std::bit_cast<std::uint64_t>(scalar_sum) ==
          std::bit_cast<std::uint64_t>(avx_sum));
    CHECK(std::bit_cast<std::uint64_t>(scalar_sse) ==
          std::bit_cast<std::uint64_t>(avx_sse));

    std::vector<double> scalar_diff(n), avx_diff(n);
    k::force_backend(k::Backend::scalar);
    k::subtract(a, b, scalar_diff);
    k::force_backend(k::Backend::avx2);
    k::subtract(a, b, avx_diff);
    CHECK(bits_equal(scalar_diff, avx_diff));

    auto scalar_acc = a;
    auto avx_acc = a;
    k::force_backend(k::Backend::scalar);
    k::add_inplace(scalar_acc, b);
    k::force_backend(k::Backend::avx2);
    k::add_inplace(avx_acc, b);
    CHECK(bits_equal(scalar_acc, avx_acc));

    std::vector<double> grad_s(n), hess_s(n), grad_v(n), hess_v(n);
    k::force_backend(k::Backend::scalar);
    k::squared_grad_hess(a, b, grad_s, hess_s);
    k::force_backend(k::Backend::avx2);
    k::squared_grad_hess(a, b, grad_v, hess_v);
    CHECK(bits_equal(grad_s, grad_v));
    CHECK(bits_equal(hess_s, hess_v));
  }
}

TEST_CASE("hist_accumulate equivalence and row-order determinism") {
  if (!k::backend_supported(k::Backend::avx2)) return;
  BackendGuard guard;
  Rng rng(7);
  const std::size_t n_rows = 513;
  const std::size_t n_bins = 11;

  std::vector<std::uint8_t> bins(n_rows);
  for (auto& b : bins) b = static_cast<std::uint8_t>(rng.uniform_below(n_bins));
  auto grads = random_vector(rng, n_rows, -5.0, 5.0);
  auto hessians = random_vector(rng, n_rows, 0.01, 1.0);

  // a scrambled strict subset of rows
  std::vector<std::uint32_t> rows;
  for (std::uint32_t i = 0; i < n_rows; ++i) {
    if (rng.bernoulli(0.7)) rows.push_back(i);
  }
  rng.shuffle(std::span<std::uint32_t>(rows));

  std::vector<double> hist_scalar(3 * n_bins, 0.0), hist_avx(3 * n_bins, 0.0);
  k::force_backend(k::Backend::scalar);
  k::hist_accumulate(hist_scalar, bins, grads, hessians, rows);
  k::force_backend(k::Backend::avx2);
  k::hist_accumulate(hist_avx, bins, grads, hessians, rows);
  CHECK(bits_equal(hist_scalar, hist_avx));

  double total_count = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b) total_count += hist_scalar[3 * b + 2];
  CHECK(total_count == static_cast<double>(rows.size()));
}

TEST_CASE("split_gains equivalence across backends") {
  if (!k::backend_supported(k::Backend::avx2)) return;
  BackendGuard guard;
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 31u, 254u}) {
    std::vector<double> gl(n), hl(n), cl(n);
    double g = 0, h = 0, c = 0;
    for (std::size_t i = 0; i < n; ++i) {
      g += rng.uniform_range(-2.0, 2.0);
      h += rng.uniform_range(0.0, 1.0);
      c += static_cast<double>(rng.uniform_int(0, 30));
      gl[i] = g;
      hl[i] = h;
      cl[i] = c;
    }
    double gp = g + rng.uniform_range(-2.0, 2.0);
    double hp = h + rng.uniform_range(0.0, 1.0);
    double cp = c + 10.0;
    double lambda = rng.bernoulli(0.5) ? 1.0 : 0.0;
    double parent_term = gp * gp / (hp + lambda);

    std::vector<double> gains_scalar(n), gains_avx(n);
    k::force_backend(k::Backend::scalar);
    k::split_gains(gl, hl, cl, gp, hp, cp, lambda, 5.0, parent_term, gains_scalar);
    k::force_backend(k::Backend::avx2);
    k::split_gains(gl, hl, cl, gp, hp, cp, lambda, 5.0, parent_term, gains_avx);
    CHECK(bits_equal(gains_scalar, gains_avx));
  }
}
