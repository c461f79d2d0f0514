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
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/segmenter.hpp"

namespace corpuskit {

inline constexpr size_t kNumPageFeatures = 5;

// Per-page heuristics used for anomaly detection. Sentence lengths are in
// words.
struct PageFeatures {
  double mean_sentence_len = 0.0;
  double std_sentence_len = 0.0;  // population standard deviation
  double max_sentence_len = 0.0;
  double short_sentence_ratio = 0.0;  // sentences with fewer than 4 words
  double uppercase_char_ratio = 0.0;  // over the raw page text

  std::array<double, kNumPageFeatures> as_array() const {
    return {mean_sentence_len, std_sentence_len, max_sentence_len,
            short_sentence_ratio, uppercase_char_ratio};
  }
  static PageFeatures from_array(const std::array<double, kNumPageFeatures>& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
  }

  bool operator==(const PageFeatures&) const = default;
};

inline constexpr size_t kShortSentenceWords = 4;

// Throws Error(kEmptyPage) when `sentences` is empty.
PageFeatures compute_features(std::span<const Sentence> sentences,
                              std::string_view page_text);

struct FeatureRecord {
  std::string page_id;
  PageFeatures features;
};

// Tab-separated `page_id \t f1 .. f5`, one page per line. Values are written
// in shortest round-trip form.
void write_feature_row(std::ostream& out, const FeatureRecord& record);
std::vector<FeatureRecord> read_feature_tsv(std::istream& in);

std::string format_double(double v);

}  // namespace corpuskit
