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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace corpuskit {

// Compute-optimal training tokens per parameter.
inline constexpr double kChinchillaTokensPerParam = 20.0;

// Throws Error(kDivisionByZero) when ref_count is 0.
double relative_tokens(uint64_t count, uint64_t ref_count);
double representation_power(double rel_tokens, uint64_t vocab, uint64_t ref_vocab);
double chinchilla_ratio(double corpus_tokens, double params);
double optimal_steps(double params, double batch, double ctx);
uint64_t tokens_seen(uint64_t steps, uint64_t batch, uint64_t ctx);
double epochs(double tokens_seen, double corpus_tokens);

struct TokenizerCount {
  std::string name;
  uint64_t vocab_size = 0;
  uint64_t total_tokens = 0;
};

struct TokenizerReport {
  std::string name;
  uint64_t vocab_size = 0;
  uint64_t total_tokens = 0;
  double relative_tokens = 0.0;
  double representation_power = 0.0;
};

// `name \t vocab_size \t total_tokens` rows; '#' lines are comments.
std::vector<TokenizerCount> read_counts_tsv(std::istream& in);

// Reports relative to the tokenizer named `reference`. Throws
// Error(kInvalidConfig) when the reference is missing.
std::vector<TokenizerReport> compare_tokenizers(std::span<const TokenizerCount> counts,
                                                const std::string& reference);
nlohmann::ordered_json to_json(std::span<const TokenizerReport> reports);
std::string format_table(std::span<const TokenizerReport> reports);

struct BudgetReport {
  uint64_t params = 0;
  uint64_t steps = 0;
  uint64_t batch = 0;
  uint64_t ctx = 0;
  uint64_t corpus_tokens = 0;
  uint64_t tokens_seen = 0;
  double epochs = 0.0;
  double chinchilla_ratio = 0.0;
  double optimal_steps = 0.0;

  nlohmann::ordered_json to_json() const;
};

BudgetReport make_budget_report(uint64_t params, uint64_t steps, uint64_t batch, uint64_t ctx,
                                uint64_t corpus_tokens);

struct Dataset {
  std::string name;
  std::vector<std::string> records;
};

struct IntersectionMatrix {
  std::vector<std::string> names;
  std::vector<uint64_t> sizes;
  std::vector<std::vector<uint64_t>> counts;  // symmetric; diagonal = sizes

  nlohmann::ordered_json to_json() const;
  std::string format_table() const;
};

// Trimmed, whitespace-collapsed form used for record equality.
std::string canonicalize_record(std::string_view record);

// Pairwise multiset intersection sizes over canonicalized records.
IntersectionMatrix split_intersections(std::span<const Dataset> datasets);

}  // namespace corpuskit
