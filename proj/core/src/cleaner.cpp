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

#include "corpuskit/cleaner.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <utility>

#include "corpuskit/error.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

constexpr std::string_view kLoremPhrase = "lorem ipsum";
constexpr std::string_view kPrivacyPhrase = "gizlilik ve çerezler";
constexpr std::string_view kJavaScriptToken = "JavaScript";

bool contains(std::string_view haystack, std::string_view needle) {
  return haystack.find(needle) != std::string_view::npos;
}

// Drops leading and trailing punctuation; all-punctuation tokens stay as is.
std::string_view strip_edge_punct(std::string_view word) {
  const std::u32string cps = unicode::decode_utf8(word);
  size_t lo = 0;
  size_t hi = cps.size();
  while (lo < hi && unicode::is_punctuation(cps[lo])) ++lo;
  while (hi > lo && unicode::is_punctuation(cps[hi - 1])) --hi;
  if (lo == hi) return word;
  size_t begin = 0;
  for (size_t i = 0; i < lo; ++i) begin += unicode::encode_utf8(std::u32string(1, cps[i])).size();
  size_t end = word.size();
  for (size_t i = cps.size(); i > hi; --i) end -= unicode::encode_utf8(std::u32string(1, cps[i - 1])).size();
  return word.substr(begin, end - begin);
}

struct CharCounts {
  size_t upper = 0;
  size_t digit = 0;
  size_t punct = 0;
};

CharCounts count_chars(std::string_view text) {
  CharCounts c;
  for (char32_t cp : unicode::decode_utf8(text)) {
    if (unicode::is_uppercase(cp)) ++c.upper;
    if (unicode::is_digit(cp)) ++c.digit;
    if (unicode::is_punctuation(cp)) ++c.punct;
  }
  return c;
}

bool rule_empty(const Sentence& s, const CleaningConfig&) {
  return unicode::trim(s.text).empty();
}

bool rule_terminal(const Sentence& s, const CleaningConfig&) {
  return !ends_with_terminal(s.text);
}

bool rule_curly(const Sentence& s, const CleaningConfig&) {
  return contains(s.text, "{") || contains(s.text, "}");
}

bool rule_javascript(const Sentence& s, const CleaningConfig&) {
  return contains(s.text, kJavaScriptToken);
}

bool rule_privacy(const Sentence& s, const CleaningConfig&) {
  return contains(unicode::fold_case(s.text), kPrivacyPhrase);
}

bool rule_pipe(const Sentence& s, const CleaningConfig&) { return contains(s.text, "|"); }

bool rule_word_count(const Sentence& s, const CleaningConfig& c) {
  const size_t words = unicode::split_words(s.text).size();
  return words < c.min_words || words > c.max_words;
}

bool rule_long_word(const Sentence& s, const CleaningConfig& c) {
  return longest_word_len(s.text) > c.max_word_len;
}

bool rule_uppercase(const Sentence& s, const CleaningConfig& c) {
  const double chars = static_cast<double>(unicode::count_scalars(s.text));
  return static_cast<double>(count_chars(s.text).upper) > c.uppercase_frac_limit * chars;
}

bool rule_numeric(const Sentence& s, const CleaningConfig& c) {
  const size_t chars = unicode::count_scalars(s.text);
  if (chars == 0) return false;
  // Tolerance keeps exact thirds (3 digits of 9) on the rejecting side.
  return static_cast<double>(count_chars(s.text).digit) >=
         c.numeric_frac_limit * static_cast<double>(chars) - 1e-9;
}

bool rule_no_punct(const Sentence& s, const CleaningConfig&) {
  return count_chars(s.text).punct == 0;
}

bool rule_duplicates(const Sentence& s, const CleaningConfig& c) {
  return duplicate_word_ratio(s.text) > c.duplicate_word_limit;
}

constexpr std::array<SentenceRule, 12> kSentenceRules = {{
    {rules::kEmpty, rule_empty},
    {rules::kTerminalPunct, rule_terminal},
    {rules::kCurlyBracket, rule_curly},
    {rules::kJavaScript, rule_javascript},
    {rules::kPrivacyCookies, rule_privacy},
    {rules::kPipe, rule_pipe},
    {rules::kWordCount, rule_word_count},
    {rules::kLongWord, rule_long_word},
    {rules::kUppercase, rule_uppercase},
    {rules::kNumeric, rule_numeric},
    {rules::kNoPunct, rule_no_punct},
    {rules::kDuplicateWords, rule_duplicates},
}};

constexpr std::array<std::string_view, 4> kPageRules = {
    rules::kAnomaly, rules::kBlocklist, rules::kLoremIpsum, rules::kLangProb};

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorCode::kInvalidConfig, message);
}

}  // namespace

void CleaningConfig::validate() const {
  require(lang_prob_threshold >= 0.0 && lang_prob_threshold <= 1.0,
          "lang_prob_threshold must be in [0, 1]");
  require(min_words <= max_words, "min_words must not exceed max_words");
  require(uppercase_frac_limit >= 0.0 && uppercase_frac_limit <= 1.0,
          "uppercase_frac_limit must be in [0, 1]");
  require(numeric_frac_limit >= 0.0 && numeric_frac_limit <= 1.0,
          "numeric_frac_limit must be in [0, 1]");
  require(duplicate_word_limit >= 1.0, "duplicate_word_limit must be >= 1");
  require(anomaly_threshold >= -0.5 && anomaly_threshold <= 0.5,
          "anomaly_threshold must be in [-0.5, 0.5]");
}

Blocklist::Blocklist(std::vector<std::string> terms) {
  for (auto& t : terms) {
    std::string folded = unicode::fold_case(unicode::trim(t));
    if (!folded.empty()) terms_.push_back(std::move(folded));
  }
}

Blocklist Blocklist::parse(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view t = unicode::trim(line);
    if (t.empty() || t.front() == '#') continue;
    terms.emplace_back(t);
  }
  return Blocklist(std::move(terms));
}

Blocklist Blocklist::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open blocklist " + path);
  return parse(in);
}

bool Blocklist::matches_folded(std::string_view folded_text) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [&](const std::string& t) { return contains(folded_text, t); });
}

bool Blocklist::matches(std::string_view text) const {
  return matches_folded(unicode::fold_case(text));
}

std::span<const SentenceRule> sentence_rules() { return kSentenceRules; }
std::span<const std::string_view> page_rule_ids() { return kPageRules; }

double duplicate_word_ratio(std::string_view text) {
  const auto words = unicode::split_words(text);
  if (words.empty()) return 0.0;
  std::set<std::string> distinct;
  for (std::string_view w : words) distinct.insert(unicode::fold_case(strip_edge_punct(w)));
  return static_cast<double>(words.size()) / static_cast<double>(distinct.size());
}

Verdict clean_page(const Page& page, const CleaningConfig& config,
                   const Blocklist& blocklist) {
  if (config.anomaly_filter) {
    if (!page.decision_score) {
      throw Error(ErrorCode::kMissingScore, "page '" + page.id + "' has no decision score");
    }
    if (*page.decision_score < config.anomaly_threshold) return Verdict::reject(rules::kAnomaly);
  }
  const std::string folded = unicode::fold_case(page.text);
  if (blocklist.matches_folded(folded)) return Verdict::reject(rules::kBlocklist);
  if (contains(folded, kLoremPhrase)) return Verdict::reject(rules::kLoremIpsum);
  if (page.lang_prob && *page.lang_prob < config.lang_prob_threshold) {
    return Verdict::reject(rules::kLangProb);
  }
  return Verdict::keep();
}

std::optional<std::string_view> first_failing_rule(const Sentence& sentence,
                                                   const CleaningConfig& config) {
  for (const SentenceRule& rule : kSentenceRules) {
    if (rule.rejects(sentence, config)) return rule.id;
  }
  return std::nullopt;
}

Verdict clean_sentence(const Sentence& sentence, const CleaningConfig& config) {
  const auto rule = first_failing_rule(sentence, config);
  return rule ? Verdict::reject(*rule) : Verdict::keep();
}

bool survives_finalization(const Page& page, const CleaningConfig& config) {
  return page.sentences.size() >= config.min_sentences_per_page;
}

std::vector<Page> finalize(std::vector<Page> pages, const CleaningConfig& config) {
  std::vector<Page> kept;
  kept.reserve(pages.size());
  for (Page& p : pages) {
    if (survives_finalization(p, config)) kept.push_back(std::move(p));
  }
  return kept;
}

}  // namespace corpuskit
