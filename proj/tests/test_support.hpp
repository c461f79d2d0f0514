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

#include <cstdint>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpuskit/random.hpp"

namespace corpuskit::testing {

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> kWords = {
      "ev",     "kedi",   "araba",   "güzel", "bugün", "yarın", "okul",   "kitap",
      "deniz",  "şehir",  "çocuk",   "yol",   "gün",   "hava",  "su",     "ağaç",
      "masa",   "kapı",   "müzik",   "film",  "haber", "spor",  "bilgi",  "dünya",
      "insan",  "zaman",  "hayat",   "iş",    "para",  "yemek", "bahçe",  "köprü",
      "orman",  "dağ",    "nehir",   "tren",  "uçak",  "sokak", "pazar",  "çarşı"};
  return kWords;
}

inline const std::vector<std::string>& sentence_starters() {
  static const std::vector<std::string> kStarters = {"Bu", "Şu", "Ali", "Ayşe", "Bugün",
                                                     "Yarın", "Onlar", "Biz", "Mehmet", "Zeynep"};
  return kStarters;
}

// A well-formed sentence of `words` words (>= 2): capitalized starter,
// lowercase body, terminal period.
inline std::string clean_sentence_text(Rng& rng, size_t words) {
  const auto& pool = word_pool();
  const auto& starters = sentence_starters();
  std::string s = starters[rng.uniform_index(starters.size())];
  for (size_t i = 1; i < words; ++i) s += " " + pool[rng.uniform_index(pool.size())];
  return s + ".";
}

inline std::string clean_page_text(Rng& rng, size_t sentences) {
  std::string text;
  for (size_t i = 0; i < sentences; ++i) {
    if (i) text += ' ';
    text += clean_sentence_text(rng, 6 + rng.uniform_index(10));
  }
  return text;
}

// Keyword-stuffed page: long runs of title-cased or upper-case keywords,
// no terminal punctuation.
inline std::string seo_spam_text(Rng& rng) {
  static const std::vector<std::string> kKeywords = {
      "UCUZ",  "OTEL",   "Kiralık", "Daire", "EN",      "İYİ",     "FİYAT",  "Kampanya",
      "Bedava", "İNDİRİM", "Satılık", "Araba", "TATİL",  "Bilet",   "Kredi",  "Kazan"};
  std::string text;
  const size_t n = 60 + rng.uniform_index(80);
  for (size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += kKeywords[rng.uniform_index(kKeywords.size())];
  }
  return text;
}

struct SyntheticCorpus {
  std::string jsonl;
  std::vector<std::string> ids;
  std::vector<bool> is_spam;
};

// `pages` records; every `spam_every`-th page (when > 0) is SEO spam.
inline SyntheticCorpus make_corpus(size_t pages, size_t spam_every, uint64_t seed) {
  Rng rng(seed);
  SyntheticCorpus c;
  std::ostringstream out;
  for (size_t i = 0; i < pages; ++i) {
    const bool spam = spam_every > 0 && i % spam_every == spam_every - 1;
    nlohmann::ordered_json j;
    j["id"] = "page-" + std::to_string(i);
    j["text"] = spam ? seo_spam_text(rng) : clean_page_text(rng, 5 + rng.uniform_index(8));
    j["lang_prob"] = 0.9 + 0.1 * rng.uniform();
    out << j.dump() << '\n';
    c.ids.push_back(j["id"]);
    c.is_spam.push_back(spam);
  }
  c.jsonl = out.str();
  return c;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("corpuskit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

}  // namespace corpuskit::testing
