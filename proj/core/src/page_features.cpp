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

#include "corpuskit/page_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <system_error>

#include "corpuskit/error.hpp"

namespace corpuskit {

PageFeatures compute_features(std::span<const Sentence> sentences,
                              std::string_view page_text) {
  if (sentences.empty()) {
    throw Error(ErrorCode::kEmptyPage, "page has no sentences");
  }
  const double n = static_cast<double>(sentences.size());
  double sum = 0.0;
  double max_len = 0.0;
  size_t short_count = 0;
  for (const Sentence& s : sentences) {
    const double len = static_cast<double>(s.word_count);
    sum += len;
    max_len = std::max(max_len, len);
    if (s.word_count < kShortSentenceWords) ++short_count;
  }
  const double mean = sum / n;
  double sq = 0.0;
  for (const Sentence& s : sentences) {
    const double d = static_cast<double>(s.word_count) - mean;
    sq += d * d;
  }
  PageFeatures f;
  f.mean_sentence_len = mean;
  f.std_sentence_len = std::sqrt(sq / n);
  f.max_sentence_len = max_len;
  f.short_sentence_ratio = static_cast<double>(short_count) / n;
  f.uppercase_char_ratio = uppercase_ratio(page_text);
  return f;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_feature_row(std::ostream& out, const FeatureRecord& record) {
  out << record.page_id;
  for (double v : record.features.as_array()) out << '\t' << format_double(v);
  out << '\n';
}

namespace {

double parse_double(std::string_view field, size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": bad number '" +
                    std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<FeatureRecord> read_feature_tsv(std::istream& in) {
  std::vector<FeatureRecord> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const size_t tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 1 + kNumPageFeatures) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected 6 fields, got " +
                      std::to_string(fields.size()));
    }
    std::array<double, kNumPageFeatures> v{};
    for (size_t k = 0; k < kNumPageFeatures; ++k) v[k] = parse_double(fields[k + 1], line_no);
    rows.push_back({std::string(fields[0]), PageFeatures::from_array(v)});
  }
  return rows;
}

}  // namespace corpuskit
