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

#include "corpuskit/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <sstream>
#include <unordered_map>

#include "corpuskit/error.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorCode::kInvalidConfig, std::string(name) + " must be positive");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string pad_right(const std::string& s, size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

std::string pad_left(const std::string& s, size_t width) {
  return std::string(width > s.size() ? width - s.size() : 0, ' ') + s;
}

}  // namespace

double relative_tokens(uint64_t count, uint64_t ref_count) {
  if (ref_count == 0) throw Error(ErrorCode::kDivisionByZero, "reference token count is 0");
  return static_cast<double>(count) / static_cast<double>(ref_count);
}

double representation_power(double rel_tokens, uint64_t vocab, uint64_t ref_vocab) {
  if (ref_vocab == 0) throw Error(ErrorCode::kDivisionByZero, "reference vocab size is 0");
  return rel_tokens * static_cast<double>(vocab) / static_cast<double>(ref_vocab);
}

double chinchilla_ratio(double corpus_tokens, double params) {
  require_positive(params, "params");
  return corpus_tokens / (params * kChinchillaTokensPerParam);
}

double optimal_steps(double params, double batch, double ctx) {
  require_positive(params, "params");
  require_positive(batch, "batch");
  require_positive(ctx, "ctx");
  return params * kChinchillaTokensPerParam / (batch * ctx);
}

uint64_t tokens_seen(uint64_t steps, uint64_t batch, uint64_t ctx) { return steps * batch * ctx; }

double epochs(double seen, double corpus_tokens) {
  require_positive(corpus_tokens, "corpus_tokens");
  return seen / corpus_tokens;
}

std::vector<TokenizerCount> read_counts_tsv(std::istream& in) {
  std::vector<TokenizerCount> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    TokenizerCount row;
    std::string vocab, total;
    if (!std::getline(fields, row.name, '\t') || !std::getline(fields, vocab, '\t') ||
        !std::getline(fields, total, '\t')) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    auto parse_u64 = [&](const std::string& s, uint64_t& out) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) + ": bad integer '" + s + "'");
      }
    };
    parse_u64(vocab, row.vocab_size);
    parse_u64(total, row.total_tokens);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TokenizerReport> compare_tokenizers(std::span<const TokenizerCount> counts,
                                                const std::string& reference) {
  const auto ref = std::find_if(counts.begin(), counts.end(),
                                [&](const TokenizerCount& c) { return c.name == reference; });
  if (ref == counts.end()) {
    throw Error(ErrorCode::kInvalidConfig, "reference tokenizer '" + reference + "' not found");
  }
  std::vector<TokenizerReport> out;
  for (const TokenizerCount& c : counts) {
    TokenizerReport r;
    r.name = c.name;
    r.vocab_size = c.vocab_size;
    r.total_tokens = c.total_tokens;
    r.relative_tokens = relative_tokens(c.total_tokens, ref->total_tokens);
    r.representation_power = representation_power(r.relative_tokens, c.vocab_size, ref->vocab_size);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::ordered_json to_json(std::span<const TokenizerReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TokenizerReport& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["vocab_size"] = r.vocab_size;
    j["total_tokens"] = r.total_tokens;
    j["relative_tokens"] = r.relative_tokens;
    j["representation_power"] = r.representation_power;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string format_table(std::span<const TokenizerReport> reports) {
  const std::vector<std::string> header = {"tokenizer", "vocab", "tokens", "relative", "repr_power"};
  std::vector<std::vector<std::string>> rows;
  for (const TokenizerReport& r : reports) {
    rows.push_back({r.name, std::to_string(r.vocab_size), std::to_string(r.total_tokens),
                    fixed(r.relative_tokens, 4), fixed(r.representation_power, 2)});
  }
  std::vector<size_t> width(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += "  ";
      out += c == 0 ? pad_right(row[c], width[c]) : pad_left(row[c], width[c]);
    }
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

nlohmann::ordered_json BudgetReport::to_json() const {
  nlohmann::ordered_json j;
  j["params"] = params;
  j["steps"] = steps;
  j["batch"] = batch;
  j["ctx"] = ctx;
  j["corpus_tokens"] = corpus_tokens;
  j["tokens_seen"] = tokens_seen;
  j["epochs"] = epochs;
  j["chinchilla_ratio"] = chinchilla_ratio;
  j["optimal_steps"] = optimal_steps;
  return j;
}

BudgetReport make_budget_report(uint64_t params, uint64_t steps, uint64_t batch, uint64_t ctx,
                                uint64_t corpus_tokens) {
  BudgetReport r;
  r.params = params;
  r.steps = steps;
  r.batch = batch;
  r.ctx = ctx;
  r.corpus_tokens = corpus_tokens;
  r.tokens_seen = corpuskit::tokens_seen(steps, batch, ctx);
  r.epochs = epochs(static_cast<double>(r.tokens_seen), static_cast<double>(corpus_tokens));
  r.chinchilla_ratio =
      chinchilla_ratio(static_cast<double>(r.tokens_seen), static_cast<double>(params));
  r.optimal_steps = optimal_steps(static_cast<double>(params), static_cast<double>(batch),
                                  static_cast<double>(ctx));
  return r;
}

std::string canonicalize_record(std::string_view record) {
  return unicode::collapse_whitespace(record);
}

IntersectionMatrix split_intersections(std::span<const Dataset> datasets) {
  IntersectionMatrix m;
  const size_t k = datasets.size();
  std::vector<std::unordered_map<std::string, uint64_t>> multisets(k);
  for (size_t i = 0; i < k; ++i) {
    m.names.push_back(datasets[i].name);
    m.sizes.push_back(datasets[i].records.size());
    for (const std::string& r : datasets[i].records) ++multisets[i][canonicalize_record(r)];
  }
  m.counts.assign(k, std::vector<uint64_t>(k, 0));
  for (size_t i = 0; i < k; ++i) {
    m.counts[i][i] = m.sizes[i];
    for (size_t j = i + 1; j < k; ++j) {
      const auto& small = multisets[i].size() <= multisets[j].size() ? multisets[i] : multisets[j];
      const auto& large = &small == &multisets[i] ? multisets[j] : multisets[i];
      uint64_t shared = 0;
      for (const auto& [record, n] : small) {
        const auto it = large.find(record);
        if (it != large.end()) shared += std::min(n, it->second);
      }
      m.counts[i][j] = m.counts[j][i] = shared;
    }
  }
  return m;
}

nlohmann::ordered_json IntersectionMatrix::to_json() const {
  nlohmann::ordered_json j;
  j["names"] = names;
  j["sizes"] = sizes;
  j["counts"] = counts;
  return j;
}

std::string IntersectionMatrix::format_table() const {
  std::vector<std::string> labels;
  for (size_t i = 0; i < names.size(); ++i) {
    labels.push_back(names[i] + " (" + std::to_string(sizes[i]) + ")");
  }
  size_t w = 0;
  for (const auto& l : labels) w = std::max(w, l.size());
  std::string out = pad_right("", w);
  for (const auto& l : labels) out += "  " + pad_left(l, w);
  out += '\n';
  for (size_t i = 0; i < names.size(); ++i) {
    out += pad_right(labels[i], w);
    for (size_t j = 0; j < names.size(); ++j) out += "  " + pad_left(std::to_string(counts[i][j]), w);
    out += '\n';
  }
  return out;
}

}  // namespace corpuskit
