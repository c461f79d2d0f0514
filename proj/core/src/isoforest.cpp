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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "corpuskit/error.hpp"
#include "corpuskit/parallel.hpp"
#include "corpuskit/random.hpp"

namespace corpuskit {

namespace {

constexpr int kDimensionRetries = 5;
constexpr int64_t kExactHarmonicBelow = 10;
constexpr char kForestMagic[] = "corpuskit-isolation-forest";
constexpr int kForestVersion = 1;

class TreeBuilder {
 public:
  TreeBuilder(std::span<const FeatureVector> sample, int height_limit, uint64_t seed)
      : sample_(sample), rng_(seed) {
    tree_.height_limit = height_limit;
    order_.resize(sample.size());
    std::iota(order_.begin(), order_.end(), size_t{0});
  }

  IsolationTree build() {
    tree_.nodes.reserve(2 * sample_.size());
    grow(0, order_.size(), 0);
    return std::move(tree_);
  }

 private:
  int grow(size_t begin, size_t end, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const size_t count = end - begin;
    if (depth >= tree_.height_limit || count <= 1) {
      make_leaf(index, count);
      return index;
    }
    for (int attempt = 0; attempt < kDimensionRetries; ++attempt) {
      const int dim = static_cast<int>(rng_.uniform_index(kNumPageFeatures));
      double lo = sample_[order_[begin]][dim];
      double hi = lo;
      for (size_t i = begin + 1; i < end; ++i) {
        const double v = sample_[order_[i]][dim];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!(lo < hi)) continue;
      double split = lo + rng_.uniform() * (hi - lo);
      if (split <= lo) split = std::nextafter(lo, hi);
      // Points with value < split go left; split lies in (lo, hi] so both
      // sides are non-empty.
      const auto mid_it = std::partition(
          order_.begin() + begin, order_.begin() + end,
          [&](size_t p) { return sample_[p][dim] < split; });
      const size_t mid = static_cast<size_t>(mid_it - order_.begin());
      tree_.nodes[index].leaf = false;
      tree_.nodes[index].split_dim = dim;
      tree_.nodes[index].split_value = split;
      tree_.nodes[index].size = 0;
      const int left = grow(begin, mid, depth + 1);
      const int right = grow(mid, end, depth + 1);
      tree_.nodes[index].left = left;
      tree_.nodes[index].right = right;
      return index;
    }
    make_leaf(index, count);
    return index;
  }

  void make_leaf(int index, size_t count) {
    tree_.nodes[index].leaf = true;
    tree_.nodes[index].size = static_cast<int>(count);
  }

  std::span<const FeatureVector> sample_;
  Rng rng_;
  IsolationTree tree_;
  std::vector<size_t> order_;
};

int depth_of(const IsolationTree& tree, int node) {
  const IsolationNode& n = tree.nodes[node];
  if (n.leaf) return 0;
  return 1 + std::max(depth_of(tree, n.left), depth_of(tree, n.right));
}

}  // namespace

void ForestConfig::validate() const {
  if (n_trees < 1) throw Error(ErrorCode::kInvalidConfig, "n_trees must be >= 1");
  if (subsample_size < 2) {
    throw Error(ErrorCode::kInvalidConfig, "subsample_size must be >= 2");
  }
}

int IsolationTree::depth() const { return nodes.empty() ? 0 : depth_of(*this, 0); }

double harmonic_number(int64_t i) {
  if (i <= 0) return 0.0;
  if (i < kExactHarmonicBelow) {
    double h = 0.0;
    for (int64_t k = i; k >= 1; --k) h += 1.0 / static_cast<double>(k);
    return h;
  }
  const double x = static_cast<double>(i);
  const double x2 = x * x;
  return std::log(x) + kEulerGamma + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) +
         1.0 / (120.0 * x2 * x2) - 1.0 / (252.0 * x2 * x2 * x2);
}

double avg_path_c(int64_t n) {
  if (n <= 1) return 0.0;
  const double m = static_cast<double>(n - 1);
  return 2.0 * harmonic_number(n - 1) - 2.0 * m / static_cast<double>(n);
}

int height_limit_for(int subsample_size) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(subsample_size))));
}

IsolationTree build_tree(std::span<const FeatureVector> sample, int height_limit,
                         uint64_t seed) {
  return TreeBuilder(sample, height_limit, seed).build();
}

IsolationForest fit(std::span<const FeatureVector> points, const ForestConfig& config) {
  config.validate();
  if (points.size() < static_cast<size_t>(config.subsample_size)) {
    throw Error(ErrorCode::kTooFewPoints,
                std::to_string(points.size()) + " points for subsample size " +
                    std::to_string(config.subsample_size));
  }
  IsolationForest forest;
  forest.config = config;
  forest.sample_size = config.subsample_size;
  forest.trees.resize(config.n_trees);
  const int limit = height_limit_for(config.subsample_size);
  const size_t psi = static_cast<size_t>(config.subsample_size);

  parallel_for(forest.trees.size(), config.workers, [&](size_t t) {
    const uint64_t tree_seed = derive_seed(config.seed, {static_cast<uint64_t>(t)});
    Rng rng(tree_seed);
    // Partial Fisher-Yates over an index permutation: uniform subsample
    // without replacement.
    std::vector<size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::vector<FeatureVector> sample(psi);
    for (size_t i = 0; i < psi; ++i) {
      const size_t j = i + rng.uniform_index(idx.size() - i);
      std::swap(idx[i], idx[j]);
      sample[i] = points[idx[i]];
    }
    forest.trees[t] = build_tree(sample, limit, rng.next_u64());
  });
  return forest;
}

double path_length(const IsolationTree& tree, const FeatureVector& x) {
  int node = 0;
  int edges = 0;
  while (!tree.nodes[node].leaf) {
    const IsolationNode& n = tree.nodes[node];
    node = x[n.split_dim] < n.split_value ? n.left : n.right;
    ++edges;
  }
  return edges + avg_path_c(tree.nodes[node].size);
}

double mean_path_length(const IsolationForest& forest, const FeatureVector& x) {
  double total = 0.0;
  for (const IsolationTree& tree : forest.trees) total += path_length(tree, x);
  return total / static_cast<double>(forest.trees.size());
}

double anomaly_score_from_path(double mean_path, int sample_size) {
  const double c = avg_path_c(sample_size);
  if (c <= 0.0) return 1.0;
  return std::exp2(-mean_path / c);
}

double anomaly_score(const IsolationForest& forest, const FeatureVector& x) {
  return anomaly_score_from_path(mean_path_length(forest, x), forest.sample_size);
}

double decision_score(const IsolationForest& forest, const FeatureVector& x) {
  return 0.5 - anomaly_score(forest, x);
}

void save_forest(std::ostream& out, const IsolationForest& forest) {
  out << kForestMagic << ' ' << kForestVersion << '\n';
  out << "n_trees " << forest.config.n_trees << '\n';
  out << "subsample_size " << forest.config.subsample_size << '\n';
  out << "seed " << forest.config.seed << '\n';
  out << "sample_size " << forest.sample_size << '\n';
  for (const IsolationTree& tree : forest.trees) {
    out << "tree " << tree.height_limit << ' ' << tree.nodes.size() << '\n';
    for (const IsolationNode& n : tree.nodes) {
      if (n.leaf) {
        out << "L " << n.size << '\n';
      } else {
        out << "S " << n.split_dim << ' ' << format_double(n.split_value) << ' '
            << n.left << ' ' << n.right << '\n';
      }
    }
  }
}

namespace {

template <typename T>
T read_field(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) {
    throw Error(ErrorCode::kCorruption, std::string("forest truncated at ") + what);
  }
  T v{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kCorruption, std::string("bad ") + what + " '" + token + "'");
  }
  return v;
}

void expect_keyword(std::istream& in, const std::string& keyword) {
  std::string token;
  if (!(in >> token) || token != keyword) {
    throw Error(ErrorCode::kCorruption, "expected '" + keyword + "'");
  }
}

}  // namespace

IsolationForest load_forest(std::istream& in) {
  expect_keyword(in, kForestMagic);
  const int version = read_field<int>(in, "version");
  if (version != kForestVersion) {
    throw Error(ErrorCode::kCorruption, "unsupported forest version " + std::to_string(version));
  }
  IsolationForest forest;
  expect_keyword(in, "n_trees");
  forest.config.n_trees = read_field<int>(in, "n_trees");
  expect_keyword(in, "subsample_size");
  forest.config.subsample_size = read_field<int>(in, "subsample_size");
  expect_keyword(in, "seed");
  forest.config.seed = read_field<uint64_t>(in, "seed");
  expect_keyword(in, "sample_size");
  forest.sample_size = read_field<int>(in, "sample_size");
  forest.config.validate();
  forest.trees.resize(forest.config.n_trees);
  for (IsolationTree& tree : forest.trees) {
    expect_keyword(in, "tree");
    tree.height_limit = read_field<int>(in, "height_limit");
    const size_t count = read_field<size_t>(in, "node count");
    tree.nodes.resize(count);
    for (size_t i = 0; i < count; ++i) {
      std::string kind;
      in >> kind;
      IsolationNode& n = tree.nodes[i];
      if (kind == "L") {
        n.leaf = true;
        n.size = read_field<int>(in, "leaf size");
      } else if (kind == "S") {
        n.leaf = false;
        n.split_dim = read_field<int>(in, "split_dim");
        n.split_value = read_field<double>(in, "split_value");
        n.left = read_field<int>(in, "left");
        n.right = read_field<int>(in, "right");
        const int c = static_cast<int>(count);
        if (n.split_dim < 0 || n.split_dim >= static_cast<int>(kNumPageFeatures) ||
            n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) ||
            n.left >= c || n.right >= c) {
          throw Error(ErrorCode::kCorruption, "invalid split node " + std::to_string(i));
        }
      } else {
        throw Error(ErrorCode::kCorruption, "bad node kind '" + kind + "'");
      }
    }
    if (tree.nodes.empty()) throw Error(ErrorCode::kCorruption, "empty tree");
  }
  return forest;
}

}  // namespace corpuskit
