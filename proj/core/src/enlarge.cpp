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

#include "corpuskit/enlarge.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "corpuskit/error.hpp"
#include "corpuskit/random.hpp"

namespace corpuskit {

namespace {

constexpr std::string_view kStacks[] = {"encoder", "decoder"};
constexpr std::string_view kLayerInfix = ".layer.";
constexpr char kManifestFormat[] = "corpuskit-tensor-manifest";
constexpr int kManifestVersion = 1;

void put_u32_le(uint32_t v, char* out) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

uint32_t get_u32_le(const char* in) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return v;
}

void write_u64_le(std::ostream& out, uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

uint64_t read_u64_le(std::istream& in, const char* what) {
  char buf[8];
  if (!in.read(buf, 8)) throw Error(ErrorCode::kCorruption, std::string("truncated ") + what);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  return v;
}

uint64_t element_count(const std::vector<int64_t>& shape) {
  uint64_t n = 1;
  for (int64_t d : shape) {
    if (d < 0) throw Error(ErrorCode::kShapeMismatch, "negative dimension");
    n *= static_cast<uint64_t>(d);
  }
  return n;
}

std::string encode_floats(std::span<const float> values) {
  std::string bytes(values.size() * 4, '\0');
  for (size_t i = 0; i < values.size(); ++i) {
    put_u32_le(std::bit_cast<uint32_t>(values[i]), bytes.data() + 4 * i);
  }
  return bytes;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

uint64_t TensorEntry::num_elements() const { return element_count(shape); }

void TensorManifest::add(std::string name, std::vector<int64_t> shape,
                         std::span<const float> values) {
  if (element_count(shape) != values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "'" + name + "': shape does not match value count");
  }
  add_raw(std::move(name), std::move(shape), encode_floats(values));
}

void TensorManifest::add_raw(std::string name, std::vector<int64_t> shape,
                             std::string_view bytes) {
  if (element_count(shape) * 4 != bytes.size()) {
    throw Error(ErrorCode::kShapeMismatch, "'" + name + "': shape does not match byte length");
  }
  if (index_.count(name)) throw Error(ErrorCode::kCorruption, "duplicate tensor '" + name + "'");
  TensorEntry e;
  e.name = std::move(name);
  e.shape = std::move(shape);
  e.offset = blob_.size();
  e.length = bytes.size();
  blob_.append(bytes);
  index_.emplace(e.name, entries_.size());
  entries_.push_back(std::move(e));
}

const TensorEntry* TensorManifest::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::string_view TensorManifest::bytes(const TensorEntry& entry) const {
  return std::string_view(blob_).substr(entry.offset, entry.length);
}

std::vector<float> TensorManifest::values(std::string_view name) const {
  const TensorEntry* e = find(name);
  if (!e) throw Error(ErrorCode::kMissingTensor, std::string(name));
  const std::string_view raw = bytes(*e);
  std::vector<float> out(raw.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<float>(get_u32_le(raw.data() + 4 * i));
  return out;
}

void TensorManifest::validate() const {
  uint64_t expected_offset = 0;
  std::set<std::string> names;
  for (const TensorEntry& e : entries_) {
    if (e.dtype != "f32") throw Error(ErrorCode::kCorruption, "'" + e.name + "': dtype must be f32");
    if (!names.insert(e.name).second) throw Error(ErrorCode::kCorruption, "duplicate '" + e.name + "'");
    if (e.offset != expected_offset) {
      throw Error(ErrorCode::kCorruption, "'" + e.name + "': tensors are not contiguous");
    }
    if (e.length != element_count(e.shape) * 4) {
      throw Error(ErrorCode::kCorruption, "'" + e.name + "': length disagrees with shape");
    }
    expected_offset += e.length;
  }
  if (expected_offset != blob_.size()) throw Error(ErrorCode::kCorruption, "blob size mismatch");
}

uint64_t blob_checksum(std::string_view blob) { return fnv1a64(blob); }

void write_manifest(std::ostream& out, const TensorManifest& m) {
  m.validate();
  nlohmann::ordered_json index;
  index["format"] = kManifestFormat;
  index["version"] = kManifestVersion;
  nlohmann::ordered_json tensors = nlohmann::ordered_json::array();
  for (const TensorEntry& e : m.entries()) {
    nlohmann::ordered_json t;
    t["name"] = e.name;
    t["dtype"] = e.dtype;
    t["shape"] = e.shape;
    t["offset"] = e.offset;
    t["length"] = e.length;
    tensors.push_back(std::move(t));
  }
  index["tensors"] = std::move(tensors);
  const std::string header = index.dump();
  write_u64_le(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(m.blob().data(), static_cast<std::streamsize>(m.blob().size()));
  write_u64_le(out, blob_checksum(m.blob()));
  if (!out) throw Error(ErrorCode::kIo, "manifest write failed");
}

TensorManifest read_manifest(std::istream& in) {
  const uint64_t header_len = read_u64_le(in, "index length");
  if (header_len > (uint64_t{1} << 32)) throw Error(ErrorCode::kCorruption, "implausible index length");
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
    throw Error(ErrorCode::kCorruption, "truncated index");
  }
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruption, std::string("bad index: ") + e.what());
  }
  TensorManifest m;
  std::vector<TensorEntry> entries;
  uint64_t blob_len = 0;
  try {
    if (index.at("format") != kManifestFormat || index.at("version") != kManifestVersion) {
      throw Error(ErrorCode::kCorruption, "unsupported manifest format");
    }
    for (const auto& t : index.at("tensors")) {
      TensorEntry e;
      e.name = t.at("name").get<std::string>();
      e.dtype = t.at("dtype").get<std::string>();
      e.shape = t.at("shape").get<std::vector<int64_t>>();
      e.offset = t.at("offset").get<uint64_t>();
      e.length = t.at("length").get<uint64_t>();
      if (e.dtype != "f32") throw Error(ErrorCode::kCorruption, "unsupported dtype " + e.dtype);
      if (e.offset != blob_len) throw Error(ErrorCode::kCorruption, "non-contiguous tensor " + e.name);
      blob_len += e.length;
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruption, std::string("bad index: ") + e.what());
  }
  std::string blob(blob_len, '\0');
  if (!in.read(blob.data(), static_cast<std::streamsize>(blob_len))) {
    throw Error(ErrorCode::kCorruption, "truncated blob");
  }
  const uint64_t checksum = read_u64_le(in, "checksum");
  if (checksum != blob_checksum(blob)) throw Error(ErrorCode::kCorruption, "checksum mismatch");
  for (TensorEntry& e : entries) {
    m.add_raw(std::move(e.name), std::move(e.shape), std::string_view(blob).substr(e.offset, e.length));
  }
  return m;
}

void save_manifest(const TensorManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  write_manifest(out, m);
}

TensorManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_manifest(in);
}

std::optional<LayerName> parse_layer_name(std::string_view name) {
  for (std::string_view stack : kStacks) {
    if (name.substr(0, stack.size()) != stack ||
        name.substr(stack.size(), kLayerInfix.size()) != kLayerInfix) {
      continue;
    }
    const std::string_view rest = name.substr(stack.size() + kLayerInfix.size());
    int layer = 0;
    const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), layer);
    const std::string_view tail(res.ptr, static_cast<size_t>(rest.data() + rest.size() - res.ptr));
    if (res.ec != std::errc() || res.ptr == rest.data() || layer < 1 || tail.size() < 2 ||
        tail.front() != '.' || rest.front() == '0') {
      throw Error(ErrorCode::kNamingConventionViolation,
                  "'" + std::string(name) + "' does not match {stack}.layer.{i}.{slot} with i >= 1");
    }
    return LayerName{std::string(stack), layer, std::string(tail.substr(1))};
  }
  return std::nullopt;
}

std::string layer_tensor_name(std::string_view stack, int layer, std::string_view slot) {
  return std::string(stack) + std::string(kLayerInfix) + std::to_string(layer) + "." +
         std::string(slot);
}

InitSpec init_for_slot(std::string_view slot, double init_std) {
  if (ends_with(slot, "bias")) return {InitKind::kZeros, 0.0, 0.0};
  if (ends_with(slot, "weight") && slot.find("norm") != std::string_view::npos) {
    return {InitKind::kOnes, 0.0, 0.0};
  }
  return {InitKind::kNormal, 0.0, init_std};
}

nlohmann::ordered_json EnlargePlan::to_json() const {
  nlohmann::ordered_json j;
  j["src_layers"] = src_layers;
  j["tgt_layers"] = tgt_layers;
  j["init_std"] = init_std;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const PlanEntry& e : mappings) {
    nlohmann::ordered_json m;
    m["target"] = e.target_name;
    if (e.copy_from) {
      m["copy_from"] = *e.copy_from;
    } else {
      switch (e.init.kind) {
        case InitKind::kNormal: m["init"] = "normal"; m["std"] = e.init.stddev; break;
        case InitKind::kZeros: m["init"] = "zeros"; break;
        case InitKind::kOnes: m["init"] = "ones"; break;
      }
      m["shape_from"] = e.shape_from;
    }
    arr.push_back(std::move(m));
  }
  j["mappings"] = std::move(arr);
  return j;
}

EnlargePlan plan_enlargement(int src_layers, int tgt_layers,
                             std::span<const std::string> tensor_names, double init_std) {
  if (src_layers < 1 || tgt_layers != 2 * src_layers) {
    throw Error(ErrorCode::kLayerCountMismatch,
                "target layers must be twice the source layers (got " +
                    std::to_string(src_layers) + " -> " + std::to_string(tgt_layers) + ")");
  }
  if (!(init_std >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "init_std must be >= 0");

  EnlargePlan plan;
  plan.src_layers = src_layers;
  plan.tgt_layers = tgt_layers;
  plan.init_std = init_std;

  // stack -> layer -> slots in name order of appearance
  std::map<std::string, std::map<int, std::vector<std::string>>> layers;
  std::vector<std::string> stack_order;
  for (const std::string& name : tensor_names) {
    const auto parsed = parse_layer_name(name);
    if (!parsed) {
      plan.mappings.push_back({name, name, {}, name});
      continue;
    }
    if (!layers.count(parsed->stack)) stack_order.push_back(parsed->stack);
    layers[parsed->stack][parsed->layer].push_back(parsed->slot);
  }
  if (layers.empty()) {
    throw Error(ErrorCode::kLayerCountMismatch, "no encoder or decoder layer tensors found");
  }
  for (const std::string& stack : stack_order) {
    const auto& by_layer = layers[stack];
    if (static_cast<int>(by_layer.size()) != src_layers || by_layer.begin()->first != 1 ||
        by_layer.rbegin()->first != src_layers) {
      throw Error(ErrorCode::kLayerCountMismatch,
                  stack + " has " + std::to_string(by_layer.size()) + " layers, expected 1.." +
                      std::to_string(src_layers));
    }
    const std::vector<std::string>& slots = by_layer.at(1);
    std::set<std::string> slot_set(slots.begin(), slots.end());
    for (const auto& [layer, layer_slots] : by_layer) {
      if (std::set<std::string>(layer_slots.begin(), layer_slots.end()) != slot_set ||
          layer_slots.size() != slots.size()) {
        throw Error(ErrorCode::kLayerCountMismatch,
                    stack + " layer " + std::to_string(layer) + " has a different slot set");
      }
    }
    for (int target = 1; target <= tgt_layers; ++target) {
      const int donor_layer = (target + 1) / 2;
      for (const std::string& slot : slots) {
        const std::string donor_name = layer_tensor_name(stack, donor_layer, slot);
        PlanEntry e;
        e.target_name = layer_tensor_name(stack, target, slot);
        e.shape_from = donor_name;
        if (target % 2 == 1) {
          e.copy_from = donor_name;
        } else {
          e.init = init_for_slot(slot, init_std);
        }
        plan.mappings.push_back(std::move(e));
      }
    }
  }
  return plan;
}

TensorManifest apply_enlargement(const TensorManifest& donor, const EnlargePlan& plan,
                                 uint64_t seed) {
  donor.validate();
  // Donor layer slots must share a shape across layers.
  std::map<std::pair<std::string, std::string>, std::vector<int64_t>> slot_shapes;
  for (const TensorEntry& e : donor.entries()) {
    const auto parsed = parse_layer_name(e.name);
    if (!parsed) continue;
    const auto key = std::make_pair(parsed->stack, parsed->slot);
    const auto [it, inserted] = slot_shapes.emplace(key, e.shape);
    if (!inserted && it->second != e.shape) {
      throw Error(ErrorCode::kShapeMismatch,
                  "'" + e.name + "' differs in shape from the same slot in other layers");
    }
  }

  TensorManifest out;
  for (const PlanEntry& m : plan.mappings) {
    const TensorEntry* shape_src = donor.find(m.shape_from);
    if (!shape_src) throw Error(ErrorCode::kMissingTensor, "donor lacks '" + m.shape_from + "'");
    auto check_slot_shape = [&](const std::vector<int64_t>& shape) {
      const auto target = parse_layer_name(m.target_name);
      if (!target) return;
      const auto it = slot_shapes.find({target->stack, target->slot});
      if (it != slot_shapes.end() && it->second != shape) {
        throw Error(ErrorCode::kShapeMismatch,
                    "'" + m.target_name + "' would not match its slot shape in the donor");
      }
    };
    check_slot_shape(shape_src->shape);
    if (m.copy_from) {
      const TensorEntry* src = donor.find(*m.copy_from);
      if (!src) throw Error(ErrorCode::kMissingTensor, "donor lacks '" + *m.copy_from + "'");
      check_slot_shape(src->shape);
      out.add_raw(m.target_name, src->shape, donor.bytes(*src));
      continue;
    }
    std::vector<float> values(shape_src->num_elements());
    switch (m.init.kind) {
      case InitKind::kZeros: std::fill(values.begin(), values.end(), 0.0f); break;
      case InitKind::kOnes: std::fill(values.begin(), values.end(), 1.0f); break;
      case InitKind::kNormal: {
        Rng rng(derive_seed(seed, m.target_name));
        for (float& v : values) v = static_cast<float>(rng.normal(m.init.mean, m.init.stddev));
        break;
      }
    }
    out.add(m.target_name, shape_src->shape, values);
  }
  out.validate();
  return out;
}

}  // namespace corpuskit
