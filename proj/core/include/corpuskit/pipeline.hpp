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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpuskit/cleaner.hpp"
#include "corpuskit/isoforest.hpp"
#include "corpuskit/segmenter.hpp"

namespace corpuskit {

struct PipelineConfig {
  CleaningConfig cleaning;
  ForestConfig forest;
  std::vector<std::string> abbreviations = SentenceSplitter::default_abbreviations();
  int workers = 1;
  size_t batch_size = 1024;

  void validate() const;
  nlohmann::ordered_json to_json() const;
};

struct CleaningReport {
  uint64_t pages_in = 0;
  uint64_t pages_out = 0;
  uint64_t sentences_in = 0;   // segmented from pages that passed page rules
  uint64_t sentences_out = 0;  // in pages that survived finalization
  uint64_t tokens_in = 0;      // whitespace tokens over all input text
  uint64_t tokens_out = 0;     // whitespace tokens over output sentences
  bool anomaly_filter_applied = false;
  int forest_sample_size = 0;
  std::map<std::string, uint64_t> page_rejections;
  std::map<std::string, uint64_t> sentence_rejections;

  uint64_t pages_rejected() const;
  uint64_t sentences_rejected() const;
  nlohmann::ordered_json to_json() const;
};

// Segment -> features -> forest fit on every page -> score -> page rules ->
// sentence rules -> finalization. The input must be seekable: the first pass
// collects feature vectors, the second streams records through the filters.
// Pages with no sentences are rejected as "empty_page" before feature
// extraction. With fewer than two scoreable pages the anomaly filter is
// skipped and reported as not applied.
CleaningReport run_pipeline(std::istream& in, std::ostream& out, const PipelineConfig& config,
                            const Blocklist& blocklist);

// First pass on its own: features for every page with at least one sentence.
std::vector<FeatureRecord> extract_features(std::istream& in, const SentenceSplitter& splitter,
                                            int workers, size_t batch_size = 1024);

}  // namespace corpuskit
