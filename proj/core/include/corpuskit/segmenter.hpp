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
#include <string>
#include <string_view>
#include <vector>

namespace corpuskit {

struct Sentence {
  std::string text;
  size_t word_count = 0;  // maximal non-whitespace runs
  size_t char_count = 0;  // Unicode scalar values

  static Sentence from_text(std::string_view text);
};

// Rule-based splitter. A sentence ends after a run of terminal punctuation
// ('.', '!', '?', '…'), optionally followed by closing quotes or brackets,
// when the next non-space scalar is an uppercase letter, a digit or an
// opening quote. A line break always ends a sentence. Tokens listed as
// abbreviations (matched exactly, including the trailing dot) never end a
// sentence.
class SentenceSplitter {
 public:
  SentenceSplitter();
  explicit SentenceSplitter(std::vector<std::string> abbreviations);

  std::vector<Sentence> split(std::string_view text) const;

  const std::vector<std::string>& abbreviations() const { return abbreviations_; }

  static const std::vector<std::string>& default_abbreviations();

 private:
  bool is_abbreviation(std::string_view token) const;

  std::vector<std::string> abbreviations_;
};

std::vector<Sentence> split_sentences(std::string_view text);

bool is_terminal_punctuation(char32_t cp);
bool is_closing_mark(char32_t cp);
bool is_opening_mark(char32_t cp);

// True if the text, after trailing closing marks, ends in terminal punctuation.
bool ends_with_terminal(std::string_view text);

double uppercase_ratio(std::string_view text);
size_t longest_word_len(std::string_view text);

}  // namespace corpuskit
