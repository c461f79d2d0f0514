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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "corpuskit/page_features.hpp"

namespace corpuskit {

using FeatureVector = std::array<double, kNumPageFeatures>;

struct ForestConfig {
  int n_trees = 100;
  int subsample_size = 256;
  uint64_t seed = 0;
  int workers = 1;  // never affects the fitted forest

  void validate() const;
};

// Flat node storage; children are indices into `nodes`. Leaves carry the
// number of training points that reached them.
struct IsolationNode {
  bool leaf = true;
  int split_dim = -1;
  double split_value = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;

  bool operator==(const IsolationNode&) const = default;
};

struct IsolationTree {
  std::vector<IsolationNode> nodes;  // nodes[0] is the root
  int height_limit = 0;

  int depth() const;
  bool operator==(const IsolationTree&) const = default;
};

struct IsolationForest {
  std::vector<IsolationTree> trees;
  ForestConfig config;
  int sample_size = 0;  // psi actually used for the normalizer

  bool operator==(const IsolationForest& o) const {
    return trees == o.trees && sample_size == o.sample_size &&
           config.n_trees == o.config.n_trees &&
           config.subsample_size == o.config.subsample_size &&
           config.seed == o.config.seed;
  }
};

inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kDefaultAnomalyThreshold = 0.05;

// H(i), summed exactly for i < 10 and from the asymptotic expansion
// ln(i) + gamma + 1/2i - 1/12i^2 + 1/120i^4 above that.
double harmonic_number(int64_t i);

// Average path length of an unsuccessful BST search over n points:
// 2 H(n-1) - 2 (n-1) / n, and 0 for n <= 1.
double avg_path_c(int64_t n);

int height_limit_for(int subsample_size);

// Throws Error(kTooFewPoints) when points.size() < config.subsample_size.
IsolationForest fit(std::span<const FeatureVector> points, const ForestConfig& config);

// Builds a single tree from the given subsample (exposed for tests).
IsolationTree build_tree(std::span<const FeatureVector> sample, int height_limit,
                         uint64_t seed);

double path_length(const IsolationTree& tree, const FeatureVector& x);
double mean_path_length(const IsolationForest& forest, const FeatureVector& x);

// 2^(-E[h] / c(psi)), in (0, 1]. Higher is more anomalous.
double anomaly_score(const IsolationForest& forest, const FeatureVector& x);
double anomaly_score_from_path(double mean_path, int sample_size);

// 0.5 - anomaly_score; pages scoring below the threshold are removed.
double decision_score(const IsolationForest& forest, const FeatureVector& x);

// Text serialization, exact for doubles.
void save_forest(std::ostream& out, const IsolationForest& forest);
IsolationForest load_forest(std::istream& in);

}  // namespace corpuskit
