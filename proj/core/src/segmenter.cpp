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

#include "corpuskit/segmenter.hpp"

#include <algorithm>
#include <utility>

#include "corpuskit/unicode.hpp"

namespace corpuskit {
namespace {

bool is_line_break(char32_t cp) {
  return cp == U'\n' || cp == U'\r' || cp == 0x0085 || cp == 0x2028 || cp == 0x2029;
}

}  // namespace

Sentence Sentence::from_text(std::string_view text) {
  Sentence s;
  s.text = std::string(unicode::trim(text));
  s.word_count = unicode::split_words(s.text).size();
  s.char_count = unicode::count_scalars(s.text);
  return s;
}

bool is_terminal_punctuation(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'…';
}

bool is_closing_mark(char32_t cp) {
  return cp == U'"' || cp == U'”' || cp == U'»' || cp == U')' ||
         cp == U']' || cp == U'\'';
}

bool is_opening_mark(char32_t cp) {
  return cp == U'"' || cp == U'“' || cp == U'«' || cp == U'\'' ||
         cp == U'(' || cp == U'[';
}

bool ends_with_terminal(std::string_view text) {
  const std::u32string cps = unicode::decode_utf8(unicode::trim(text));
  size_t end = cps.size();
  while (end > 0 && is_closing_mark(cps[end - 1]) && !is_terminal_punctuation(cps[end - 1])) {
    --end;
  }
  return end > 0 && is_terminal_punctuation(cps[end - 1]);
}

const std::vector<std::string>& SentenceSplitter::default_abbreviations() {
  static const std::vector<std::string> kDefaults = {"Dr.", "Prof.", "vb.", "vs.", "No."};
  return kDefaults;
}

SentenceSplitter::SentenceSplitter() : abbreviations_(default_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::vector<std::string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

bool SentenceSplitter::is_abbreviation(std::string_view token) const {
  return std::find(abbreviations_.begin(), abbreviations_.end(), token) !=
         abbreviations_.end();
}

std::vector<Sentence> SentenceSplitter::split(std::string_view text) const {
  const std::u32string cps = unicode::decode_utf8(text);
  std::vector<Sentence> out;
  size_t start = 0;

  auto emit = [&](size_t end) {
    const std::string piece = unicode::encode_utf8(
        std::u32string_view(cps).substr(start, end - start));
    if (!unicode::trim(piece).empty()) out.push_back(Sentence::from_text(piece));
    start = end;
  };

  size_t i = 0;
  while (i < cps.size()) {
    const char32_t cp = cps[i];
    if (is_line_break(cp)) {
      emit(i);
      ++i;
      continue;
    }
    if (!is_terminal_punctuation(cp)) {
      ++i;
      continue;
    }
    size_t end = i;
    while (end < cps.size() && is_terminal_punctuation(cps[end])) ++end;
    while (end < cps.size() && is_closing_mark(cps[end])) ++end;

    size_t next = end;
    while (next < cps.size() && unicode::is_whitespace(cps[next]) &&
           !is_line_break(cps[next])) {
      ++next;
    }
    const bool followed_by_space = next > end;
    bool boundary = false;
    if (next == cps.size()) {
      boundary = true;
    } else if (followed_by_space) {
      const char32_t c = cps[next];
      boundary = unicode::is_uppercase(c) || unicode::is_digit(c) ||
                 is_opening_mark(c) || is_line_break(c);
    }
    if (boundary) {
      // The token ending at the punctuation run decides abbreviations.
      size_t token_begin = i;
      while (token_begin > start && !unicode::is_whitespace(cps[token_begin - 1])) {
        --token_begin;
      }
      const std::string token = unicode::encode_utf8(
          std::u32string_view(cps).substr(token_begin, end - token_begin));
      if (!is_abbreviation(token)) emit(end);
    }
    i = end;
  }
  emit(cps.size());
  return out;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  static const SentenceSplitter kSplitter;
  return kSplitter.split(text);
}

double uppercase_ratio(std::string_view text) {
  const std::u32string cps = unicode::decode_utf8(text);
  if (cps.empty()) return 0.0;
  const auto upper = std::count_if(cps.begin(), cps.end(), unicode::is_uppercase);
  return static_cast<double>(upper) / static_cast<double>(cps.size());
}

size_t longest_word_len(std::string_view text) {
  size_t best = 0;
  for (std::string_view w : unicode::split_words(text)) {
    best = std::max(best, unicode::count_scalars(w));
  }
  return best;
}

}  // namespace corpuskit
