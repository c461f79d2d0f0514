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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace corpuskit {

struct TensorEntry {
  std::string name;
  std::string dtype = "f32";
  std::vector<int64_t> shape;
  uint64_t offset = 0;
  uint64_t length = 0;  // bytes

  uint64_t num_elements() const;
  bool operator==(const TensorEntry&) const = default;
};

// Named float32 tensors stored back to back in one little-endian blob.
//
// File layout: u64 index length, UTF-8 JSON index, blob bytes, u64 FNV-1a
// checksum of the blob. All integers little-endian.
class TensorManifest {
 public:
  // Appends a tensor at the end of the blob. Throws Error(kShapeMismatch) if
  // the element count disagrees with the shape, Error(kCorruption) on a
  // duplicate name.
  void add(std::string name, std::vector<int64_t> shape, std::span<const float> values);
  void add_raw(std::string name, std::vector<int64_t> shape, std::string_view bytes);

  const std::vector<TensorEntry>& entries() const { return entries_; }
  const std::string& blob() const { return blob_; }
  const TensorEntry* find(std::string_view name) const;

  std::string_view bytes(const TensorEntry& entry) const;
  std::vector<float> values(std::string_view name) const;

  // Checks the container invariants; throws Error(kCorruption).
  void validate() const;

  bool operator==(const TensorManifest& o) const {
    return entries_ == o.entries_ && blob_ == o.blob_;
  }

 private:
  std::vector<TensorEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
  std::string blob_;
};

uint64_t blob_checksum(std::string_view blob);

void write_manifest(std::ostream& out, const TensorManifest& m);
TensorManifest read_manifest(std::istream& in);
void save_manifest(const TensorManifest& m, const std::string& path);
TensorManifest load_manifest(const std::string& path);

// `{encoder|decoder}.layer.{i}.{slot}` with 1-based i.
struct LayerName {
  std::string stack;
  int layer = 0;
  std::string slot;
};

// nullopt for non-layer tensors. Throws Error(kNamingConventionViolation)
// for names under a layer prefix that do not parse.
std::optional<LayerName> parse_layer_name(std::string_view name);
std::string layer_tensor_name(std::string_view stack, int layer, std::string_view slot);

enum class InitKind { kNormal, kZeros, kOnes };

struct InitSpec {
  InitKind kind = InitKind::kNormal;
  double mean = 0.0;
  double stddev = 0.02;
};

// Bias slots start at zero and norm gains at one; everything else is drawn
// from normal(0, init_std).
InitSpec init_for_slot(std::string_view slot, double init_std);

struct PlanEntry {
  std::string target_name;
  std::optional<std::string> copy_from;  // donor tensor, bit-exact copy
  InitSpec init;                         // used when copy_from is empty
  std::string shape_from;                // donor tensor supplying the shape
};

struct EnlargePlan {
  int src_layers = 0;
  int tgt_layers = 0;
  double init_std = 0.02;
  std::vector<PlanEntry> mappings;

  nlohmann::ordered_json to_json() const;
};

// Target layer 2k-1 takes donor layer k; even target layers are freshly
// initialized; non-layer tensors are copied verbatim. Throws
// Error(kLayerCountMismatch) unless tgt_layers == 2 * src_layers and every
// stack present has layers 1..src_layers with identical slots.
EnlargePlan plan_enlargement(int src_layers, int tgt_layers,
                             std::span<const std::string> tensor_names, double init_std = 0.02);

// Throws Error(kMissingTensor) or Error(kShapeMismatch). Fresh tensors are
// seeded per target name, so the output does not depend on tensor order.
TensorManifest apply_enlargement(const TensorManifest& donor, const EnlargePlan& plan,
                                 uint64_t seed);

}  // namespace corpuskit
