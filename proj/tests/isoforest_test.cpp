/*
 * Copyright 2026 The corpuskit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "corpuskit/isoforest.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <sstream>

#include "corpuskit/error.hpp"
#include "corpuskit/random.hpp"

namespace corpuskit {
namespace {

// Brute-force harmonic sum; independent of harmonic_number().
double harmonic_oracle(int64_t n) {
  double h = 0.0;
  for (int64_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
  return h;
}

double c_oracle(int64_t n) {
  if (n <= 1) return 0.0;
  return 2.0 * harmonic_oracle(n - 1) - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

// Hand recursion over the node structure.
double path_oracle(const IsolationTree& t, int node, const FeatureVector& x, int depth) {
  const IsolationNode& n = t.nodes[node];
  if (n.leaf) return depth + c_oracle(n.size);
  return path_oracle(t, x[n.split_dim] < n.split_value ? n.left : n.right, x, depth + 1);
}

IsolationTree depth_two_tree() {
  // root: f0 < 1.0 ? (f2 < 0.5 ? leaf(3) : leaf(40)) : leaf(1)
  IsolationTree t;
  t.height_limit = 8;
  t.nodes = {
      {false, 0, 1.0, 1, 4, 0}, {false, 2, 0.5, 2, 3, 0}, {true, -1, 0, -1, -1, 3},
      {true, -1, 0, -1, -1, 40}, {true, -1, 0, -1, -1, 1},
  };
  return t;
}

std::vector<FeatureVector> cluster_with_outlier(uint64_t seed, size_t n) {
  Rng rng(seed);
  std::vector<FeatureVector> pts;
  for (size_t i = 0; i < n; ++i) {
    FeatureVector p;
    for (double& v : p) v = rng.normal(0.0, 0.1);
    pts.push_back(p);
  }
  pts.push_back({8.0, 8.0, 8.0, 8.0, 8.0});
  return pts;
}

TEST(AvgPathC, SmallValues) {
  EXPECT_EQ(avg_path_c(0), 0.0);
  EXPECT_EQ(avg_path_c(1), 0.0);
  EXPECT_EQ(avg_path_c(2), 1.0);
  for (int64_t n = 2; n <= 10; ++n) EXPECT_DOUBLE_EQ(avg_path_c(n), c_oracle(n)) << n;
}

TEST(AvgPathC, MatchesHarmonicOracle) {
  for (int64_t n : {12, 100, 256, 1000, 100000}) {
    EXPECT_NEAR(avg_path_c(n), c_oracle(n), 1e-10) << n;
  }
}

TEST(Fit, IdenticalPointsGiveSingleLeafTrees) {
  std::vector<FeatureVector> pts(512, FeatureVector{1, 2, 3, 0.5, 0.1});
  const IsolationForest f = fit(pts, {.n_trees = 20, .subsample_size = 256, .seed = 3});
  for (const IsolationTree& t : f.trees) {
    ASSERT_EQ(t.nodes.size(), 1u);
    EXPECT_EQ(t.nodes[0].size, 256);
  }
  EXPECT_DOUBLE_EQ(anomaly_score(f, pts[0]), 0.5);
  EXPECT_DOUBLE_EQ(anomaly_score(f, FeatureVector{9, 9, 9, 9, 9}), 0.5);
}

TEST(Fit, TooFewPoints) {
  std::vector<FeatureVector> pts(10);
  try {
    fit(pts, {.n_trees = 5, .subsample_size = 256, .seed = 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewPoints);
  }
}

TEST(Fit, DeterministicAndWorkerIndependent) {
  Rng rng(1);
  std::vector<FeatureVector> pts(20);
  for (auto& p : pts)
    for (double& v : p) v = rng.uniform();
  const ForestConfig cfg{.n_trees = 10, .subsample_size = 16, .seed = 77};
  const IsolationForest a = fit(pts, cfg);
  const IsolationForest b = fit(pts, cfg);
  ForestConfig parallel = cfg;
  parallel.workers = 4;
  const IsolationForest c = fit(pts, parallel);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(Fit, TreeInvariants) {
  const auto pts = cluster_with_outlier(9, 2000);
  const IsolationForest f = fit(pts, {.n_trees = 50, .subsample_size = 256, .seed = 1});
  ASSERT_EQ(f.trees.size(), 50u);
  for (const IsolationTree& t : f.trees) {
    EXPECT_EQ(t.height_limit, 8);
    EXPECT_LE(t.depth(), t.height_limit);
    int leaf_total = 0;
    for (const auto& n : t.nodes)
      if (n.leaf) leaf_total += n.size;
    EXPECT_EQ(leaf_total, 256);
  }
  const double bound = 8 + avg_path_c(256);
  for (size_t i = 0; i < pts.size(); i += 97) {
    for (const IsolationTree& t : f.trees) EXPECT_LE(path_length(t, pts[i]), bound);
  }
}

TEST(PathLength, SingleLeafTrees) {
  IsolationTree one;
  one.nodes = {{true, -1, 0, -1, -1, 1}};
  EXPECT_EQ(path_length(one, {}), 0.0);
  IsolationTree full;
  full.nodes = {{true, -1, 0, -1, -1, 256}};
  EXPECT_DOUBLE_EQ(path_length(full, {}), avg_path_c(256));
}

TEST(PathLength, HandBuiltTreeMatchesRecursiveOracle) {
  const IsolationTree t = depth_two_tree();
  const std::vector<FeatureVector> probes = {
      {0, 0, 0, 0, 0}, {0, 0, 0.9, 0, 0}, {5, 0, 0, 0, 0}, {1.0, 0, 0.5, 0, 0}, {0.99, 0, 0.49, 0, 0}};
  for (const auto& x : probes) EXPECT_NEAR(path_length(t, x), path_oracle(t, 0, x, 0), 1e-10);
  EXPECT_DOUBLE_EQ(path_length(t, {0, 0, 0, 0, 0}), 2.0 + c_oracle(3));
  EXPECT_DOUBLE_EQ(path_length(t, {5, 0, 0, 0, 0}), 1.0);
}

TEST(AnomalyScore, ReferencePoints) {
  EXPECT_DOUBLE_EQ(anomaly_score_from_path(avg_path_c(256), 256), 0.5);
  EXPECT_GT(anomaly_score_from_path(0.01, 256), 0.99);
  EXPECT_LE(anomaly_score_from_path(0.0, 256), 1.0);
}

TEST(AnomalyScore, HandBuiltTwoTreeForest) {
  IsolationForest f;
  f.sample_size = 64;
  f.config.n_trees = 2;
  f.trees = {depth_two_tree(), IsolationTree{{{false, 1, 0.0, 1, 2, 0},
                                               {true, -1, 0, -1, -1, 10},
                                               {true, -1, 0, -1, -1, 54}},
                                              6}};
  const FeatureVector x{0, 0, 0, 0, 0};
  const double h1 = 2.0 + c_oracle(3);
  const double h2 = 1.0 + c_oracle(54);
  const double expected = std::pow(2.0, -((h1 + h2) / 2.0) / c_oracle(64));
  EXPECT_NEAR(anomaly_score(f, x), expected, 1e-12);
  EXPECT_NEAR(decision_score(f, x), 0.5 - expected, 1e-12);
}

TEST(AnomalyScore, MonotoneDecreasingInPathLength) {
  double prev = 2.0;
  for (double h = 0.0; h < 30.0; h += 0.25) {
    const double s = anomaly_score_from_path(h, 256);
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    EXPECT_LE(s, 1.0);
    prev = s;
  }
}

TEST(DecisionScore, ThresholdConvention) {
  // decision = 0.5 - s; removal below 0.05.
  for (auto [s, keep] : std::vector<std::pair<double, bool>>{{0.5, false}, {0.4, true}, {0.46, false}}) {
    EXPECT_EQ(0.5 - s >= kDefaultAnomalyThreshold, keep) << s;
  }
}

TEST(Separation, OutlierScoresAboveCentroidForTenSeeds) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = cluster_with_outlier(100 + seed, 1000);
    const IsolationForest f = fit(pts, {.n_trees = 100, .subsample_size = 256, .seed = seed});
    EXPECT_GT(anomaly_score(f, pts.back()), anomaly_score(f, FeatureVector{0, 0, 0, 0, 0}))
        << "seed " << seed;
  }
}

TEST(Serialization, RoundTrip) {
  const auto pts = cluster_with_outlier(4, 300);
  const IsolationForest f = fit(pts, {.n_trees = 7, .subsample_size = 64, .seed = 12});
  std::stringstream ss;
  save_forest(ss, f);
  const IsolationForest g = load_forest(ss);
  EXPECT_EQ(f, g);
  for (size_t i = 0; i < pts.size(); i += 13) {
    EXPECT_EQ(anomaly_score(f, pts[i]), anomaly_score(g, pts[i]));
  }
  std::stringstream again;
  save_forest(again, g);
  std::stringstream first;
  save_forest(first, f);
  EXPECT_EQ(first.str(), again.str());
}

TEST(Serialization, RejectsCorruptInput) {
  std::stringstream bad("corpuskit-isolation-forest 1\nn_trees 1\nsubsample_size 4\nseed 0\n"
                        "sample_size 4\ntree 2 1\nS 0 0.5 7 8\n");
  EXPECT_THROW(load_forest(bad), Error);
  std::stringstream wrong("not-a-forest");
  EXPECT_THROW(load_forest(wrong), Error);
}

}  // namespace
}  // namespace corpuskit
