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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/segmenter.hpp"

namespace corpuskit {

struct Page {
  std::string id;
  std::string text;
  std::optional<double> lang_prob;
  std::vector<Sentence> sentences;
  std::optional<double> decision_score;
};

struct Verdict {
  bool kept = true;
  std::optional<std::string> rule_id;  // first rule that rejected

  static Verdict keep() { return {}; }
  static Verdict reject(std::string_view rule) { return {false, std::string(rule)}; }
};

struct CleaningConfig {
  bool anomaly_filter = true;
  double anomaly_threshold = 0.05;
  double lang_prob_threshold = 0.85;
  std::string blocklist_path;
  size_t min_sentences_per_page = 5;
  size_t min_words = 4;
  size_t max_words = 50;
  size_t max_word_len = 30;
  double uppercase_frac_limit = 0.5;
  double numeric_frac_limit = 1.0 / 3.0;
  double duplicate_word_limit = 2.0;

  void validate() const;
};

// Case-insensitive substring blocklist. One term per line, '#' starts a
// comment line, blank lines are ignored.
class Blocklist {
 public:
  Blocklist() = default;
  explicit Blocklist(std::vector<std::string> terms);

  static Blocklist parse(std::istream& in);
  static Blocklist load(const std::string& path);

  // `folded_text` must already be case-folded.
  bool matches_folded(std::string_view folded_text) const;
  bool matches(std::string_view text) const;

  size_t size() const { return terms_.size(); }

 private:
  std::vector<std::string> terms_;  // folded
};

namespace rules {
// Page rules, in evaluation order.
inline constexpr std::string_view kAnomaly = "anomaly";
inline constexpr std::string_view kBlocklist = "blocklist";
inline constexpr std::string_view kLoremIpsum = "lorem_ipsum";
inline constexpr std::string_view kLangProb = "lang_prob";
// Pipeline-level page outcomes.
inline constexpr std::string_view kEmptyPage = "empty_page";
inline constexpr std::string_view kMinSentences = "min_sentences";
// Sentence rules, in evaluation order.
inline constexpr std::string_view kEmpty = "empty";
inline constexpr std::string_view kTerminalPunct = "terminal_punct";
inline constexpr std::string_view kCurlyBracket = "curly_bracket";
inline constexpr std::string_view kJavaScript = "javascript";
inline constexpr std::string_view kPrivacyCookies = "privacy_cookies";
inline constexpr std::string_view kPipe = "pipe";
inline constexpr std::string_view kWordCount = "word_count";
inline constexpr std::string_view kLongWord = "long_word";
inline constexpr std::string_view kUppercase = "uppercase";
inline constexpr std::string_view kNumeric = "numeric";
inline constexpr std::string_view kNoPunct = "no_punct";
inline constexpr std::string_view kDuplicateWords = "duplicate_words";
}  // namespace rules

struct SentenceRule {
  std::string_view id;
  bool (*rejects)(const Sentence&, const CleaningConfig&);
};

// The twelve sentence rules in evaluation order. Each predicate is usable in
// isolation; clean_sentence reports the first one that fires.
std::span<const SentenceRule> sentence_rules();
std::span<const std::string_view> page_rule_ids();

// Throws Error(kMissingScore) when the anomaly filter is on and the page has
// no decision score.
Verdict clean_page(const Page& page, const CleaningConfig& config,
                   const Blocklist& blocklist);

Verdict clean_sentence(const Sentence& sentence, const CleaningConfig& config);
std::optional<std::string_view> first_failing_rule(const Sentence& sentence,
                                                   const CleaningConfig& config);

// Keeps only pages with at least min_sentences_per_page sentences, in order.
bool survives_finalization(const Page& page, const CleaningConfig& config);
std::vector<Page> finalize(std::vector<Page> pages, const CleaningConfig& config);

// Ratio of words to distinct case-folded words, edge punctuation ignored;
// 0 for empty text.
double duplicate_word_ratio(std::string_view text);

}  // namespace corpuskit
