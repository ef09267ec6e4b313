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

#include <numeric>
#include <vector>

#include "arrkit/errors.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/rng.hpp"
#include "support/split_oracle.hpp"

using namespace arrkit;
using namespace arrkit::gbdt;

namespace {

struct SplitSetup {
  FeatureMatrix matrix;
  BinMapper mapper;
  BinnedMatrix binned;
  LeafHistograms hist;
  NodeStats stats;
  std::vector<int> actives;
  std::vector<double> grads, hessians;
};

SplitSetup build_setup(const test::OracleDataset& data) {
  SplitSetup setup;
  const std::size_t n = data.grads.size();
  std::vector<std::string> names;
  for (std::size_t f = 0; f < data.features.size(); ++f) {
    names.push_back("f" + std::to_string(f));
  }
  setup.matrix = FeatureMatrix(n, names, {});
  for (std::size_t f = 0; f < data.features.size(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      setup.matrix.set(i, f, data.features[f][i]);
    }
  }
  setup.mapper = BinMapper::build(setup.matrix, 256);  // lossless for <=256 rows
  setup.binned = BinnedMatrix::build(setup.matrix, setup.mapper);
  setup.grads = data.grads;
  setup.hessians = data.hessians;

  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  setup.hist = LeafHistograms(setup.mapper);
  for (std::size_t f = 0; f < data.features.size(); ++f) {
    kernels::hist_accumulate(setup.hist.feature_bins(f), setup.binned.column(f),
                             setup.grads, setup.hessians, rows);
    setup.actives.push_back(static_cast<int>(f));
  }
  for (std::size_t i = 0; i < n; ++i) {
    setup.stats.grad_sum += data.grads[i];
    setup.stats.hess_sum += data.hessians[i];
  }
  setup.stats.count = static_cast<double>(n);
  return setup;
}

GbdtConfig loose_config() {
  GbdtConfig config;
  config.min_samples_leaf = 1;
  config.lambda_l2 = 0.0;
  config.max_bins = 256;
  return config;
}

}  // namespace

TEST_CASE("perfect binary split earns gain 1") {
  // squared loss around the mean of {0,0,1,1}: grads +-0.5, hess 1
  test::OracleDataset data;
  data.features = {{0.0, 0.0, 1.0, 1.0}};
  data.grads = {0.5, 0.5, -0.5, -0.5};
  data.hessians = {1.0, 1.0, 1.0, 1.0};
  auto setup = build_setup(data);

  auto split = find_best_split(setup.hist, setup.stats, loose_config(),
                               setup.actives, setup.mapper);
  REQUIRE(split.has_value());
  CHECK(split->feature == 0);
  CHECK(split->bin == 0);
  CHECK(split->gain == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(split->threshold == 0.0);
  CHECK(split->left.count == 2.0);
  CHECK(split->right.count == 2.0);

  auto oracle = test::brute_force_best_split(data, 0.0, 1);
  REQUIRE(oracle.has_value());
  CHECK(oracle->feature == split->feature);
  CHECK(oracle->threshold_index == split->bin);
  CHECK(oracle->gain == doctest::Approx(split->gain).epsilon(1e-12));
}

TEST_CASE("identical targets produce no split") {
  test::OracleDataset data;
  data.features = {{0.0, 1.0, 2.0, 3.0}};
  data.grads = {0.0, 0.0, 0.0, 0.0};  // centered constant target
  data.hessians = {1.0, 1.0, 1.0, 1.0};
  auto setup = build_setup(data);
  auto split = find_best_split(setup.hist, setup.stats, loose_config(),
                               setup.actives, setup.mapper);
  CHECK(!split.has_value());
}

TEST_CASE("min_samples_leaf rules out lopsided splits") {
  test::OracleDataset data;
  data.features = {{0.0, 1.0, 1.0, 1.0, 1.0, 1.0}};
  data.grads = {3.0, -1.0, -1.0, -1.0, -0.5, 0.5};
  data.hessians = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  auto setup = build_setup(data);
  GbdtConfig config = loose_config();
  config.min_samples_leaf = 2;  // the only boundary strands one row left
  auto split = find_best_split(setup.hist, setup.stats, config, setup.actives,
                               setup.mapper);
  CHECK(!split.has_value());
}

TEST_CASE("ties break toward the lowest feature index") {
  test::OracleDataset data;
  data.features = {{0.0, 0.0, 1.0, 1.0}, {0.0, 0.0, 1.0, 1.0}};  // duplicates
  data.grads = {0.5, 0.5, -0.5, -0.5};
  data.hessians = {1.0, 1.0, 1.0, 1.0};
  auto setup = build_setup(data);
  auto split = find_best_split(setup.hist, setup.stats, loose_config(),
                               setup.actives, setup.mapper);
  REQUIRE(split.has_value());
  CHECK(split->feature == 0);
}

TEST_CASE("histograms that disagree with parent stats are an internal error") {
  test::OracleDataset data;
  data.features = {{0.0, 0.0, 1.0, 1.0}};
  data.grads = {0.5, 0.5, -0.5, -0.5};
  data.hessians = {1.0, 1.0, 1.0, 1.0};
  auto setup = build_setup(data);
  NodeStats corrupted = setup.stats;
  corrupted.count += 1.0;
  CHECK_THROWS_AS(find_best_split(setup.hist, corrupted, loose_config(),
                                  setup.actives, setup.mapper),
                  InternalError);
}

TEST_CASE("split finder matches the exhaustive oracle on random data") {
  Rng rng(20268);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 8 + static_cast<std::size_t>(rng.uniform_int(0, 56));
    const std::size_t n_features = 1 + static_cast<std::size_t>(rng.uniform_int(0, 3));
    const int distinct = 2 + static_cast<int>(rng.uniform_int(0, 10));

    test::OracleDataset data;
    data.features.resize(n_features);
    for (auto& column : data.features) {
      column.resize(n);
      for (auto& v : column) {
        v = static_cast<double>(rng.uniform_int(0, distinct - 1)) * 0.37 - 1.1;
      }
    }
    data.grads.resize(n);
    data.hessians.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      data.grads[i] = rng.uniform_range(-2.0, 2.0);
      data.hessians[i] = rng.uniform_range(0.1, 2.0);
    }
    double lambda = rng.bernoulli(0.5) ? 1.0 : 0.0;
    int min_leaf = static_cast<int>(rng.uniform_int(1, 4));

    auto setup = build_setup(data);
    GbdtConfig config = loose_config();
    config.lambda_l2 = lambda;
    config.min_samples_leaf = min_leaf;

    auto engine = find_best_split(setup.hist, setup.stats, config,
                                  setup.actives, setup.mapper);
    auto oracle = test::brute_force_best_split(data, lambda, min_leaf);
    REQUIRE(engine.has_value() == oracle.has_value());
    if (engine) {
      CHECK(engine->feature == oracle->feature);
      CHECK(engine->bin == oracle->threshold_index);
      CHECK(std::abs(engine->gain - oracle->gain) <= 1e-9);
    }
  }
}

TEST_CASE("grow_tree respects the leaf budget") {
  Rng data_rng(4);
  const std::size_t n = 128;
  FeatureMatrix matrix(n, {"a", "b"}, {});
  std::vector<double> grads(n), hessians(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    matrix.set(i, 0, data_rng.uniform());
    matrix.set(i, 1, data_rng.uniform());
    grads[i] = data_rng.uniform_range(-1.0, 1.0);
  }
  BinMapper mapper = BinMapper::build(matrix, 64);
  BinnedMatrix binned = BinnedMatrix::build(matrix, mapper);
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);

  GbdtConfig config = loose_config();
  config.num_leaves = 2;
  config.feature_fraction = 1.0;
  Rng rng(1);
  Tree stump = grow_tree(binned, mapper, grads, hessians, rows, config, rng);
  CHECK(stump.leaf_count() == 2);
  CHECK(stump.depth() == 1);
}

TEST_CASE("pure nodes become zero-valued leaves") {
  const std::size_t n = 32;
  FeatureMatrix matrix(n, {"a"}, {});
  std::vector<double> grads(n, 0.0), hessians(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) matrix.set(i, 0, static_cast<double>(i % 7));
  BinMapper mapper = BinMapper::build(matrix, 64);
  BinnedMatrix binned = BinnedMatrix::build(matrix, mapper);
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);

  GbdtConfig config = loose_config();
  Rng rng(1);
  Tree tree = grow_tree(binned, mapper, grads, hessians, rows, config, rng);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.nodes[0].value == 0.0);
}

TEST_CASE("grown trees respect structural bounds on random data") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng data_rng(seed);
    const std::size_t n = 256;
    FeatureMatrix matrix(n, {"a", "b", "c", "d"}, {});
    std::vector<double> grads(n), hessians(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t f = 0; f < 4; ++f) matrix.set(i, f, data_rng.uniform());
      grads[i] = data_rng.uniform_range(-2.0, 2.0);
      hessians[i] = data_rng.uniform_range(0.2, 1.0);
    }
    BinMapper mapper = BinMapper::build(matrix, 32);
    BinnedMatrix binned = BinnedMatrix::build(matrix, mapper);
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);

    GbdtConfig config = loose_config();
    config.num_leaves = 10;
    config.max_depth = 1 + static_cast<int>(seed % 4);
    config.feature_fraction = seed % 2 == 0 ? 1.0 : 0.5;
    Rng rng(seed * 31);
    Tree tree = grow_tree(binned, mapper, grads, hessians, rows, config, rng);
    CHECK(tree.leaf_count() <= config.num_leaves);
    CHECK(tree.depth() <= config.max_depth);
  }
}
