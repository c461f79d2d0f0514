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

#include "corpuskit/noising.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>

#include "corpuskit/corpus.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/parallel.hpp"

namespace corpuskit {

namespace {

constexpr uint64_t kPoissonMaxK = 10000;

double ratio(uint64_t num, uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void NoisingConfig::validate() const {
  if (!(mask_ratio > 0.0 && mask_ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "mask_ratio must be in (0, 1)");
  }
  if (!(poisson_lambda > 0.0) || !std::isfinite(poisson_lambda)) {
    throw Error(ErrorCode::kInvalidConfig, "poisson_lambda must be positive");
  }
  if (decoder_len < 3) throw Error(ErrorCode::kInvalidConfig, "decoder_len must be >= 3");
  if (encoder_len < 1 || encoder_len > decoder_len) {
    throw Error(ErrorCode::kInvalidConfig, "encoder_len must be in [1, decoder_len]");
  }
}

void NoisingTelemetry::merge(const NoisingTelemetry& o) {
  examples += o.examples;
  skipped_documents += o.skipped_documents;
  skipped_sentences += o.skipped_sentences;
  chunk_tokens += o.chunk_tokens;
  removed_tokens += o.removed_tokens;
  poisson_draws += o.poisson_draws;
  poisson_sum += o.poisson_sum;
  zero_draws += o.zero_draws;
  zero_insertions += o.zero_insertions;
  spans += o.spans;
  span_tokens += o.span_tokens;
  clamped_draws += o.clamped_draws;
  shrunk_spans += o.shrunk_spans;
  truncated_examples += o.truncated_examples;
}

double NoisingTelemetry::mean_span_length_pre_clamp() const { return ratio(poisson_sum, poisson_draws); }
double NoisingTelemetry::mean_span_length() const { return ratio(span_tokens, spans); }
double NoisingTelemetry::clamp_rate() const {
  return ratio(clamped_draws, poisson_draws - zero_draws);
}
double NoisingTelemetry::truncation_rate() const { return ratio(truncated_examples, examples); }
double NoisingTelemetry::mask_fraction() const { return ratio(removed_tokens, chunk_tokens); }

nlohmann::ordered_json NoisingTelemetry::to_json() const {
  nlohmann::ordered_json j;
  j["examples"] = examples;
  j["skipped_documents"] = skipped_documents;
  j["skipped_sentences"] = skipped_sentences;
  j["chunk_tokens"] = chunk_tokens;
  j["removed_tokens"] = removed_tokens;
  j["mask_fraction"] = mask_fraction();
  j["poisson_draws"] = poisson_draws;
  j["zero_draws"] = zero_draws;
  j["zero_insertions"] = zero_insertions;
  j["spans"] = spans;
  j["mean_span_length_pre_clamp"] = mean_span_length_pre_clamp();
  j["mean_span_length"] = mean_span_length();
  j["clamp_rate"] = clamp_rate();
  j["shrunk_spans"] = shrunk_spans;
  j["truncated_examples"] = truncated_examples;
  j["truncation_rate"] = truncation_rate();
  return j;
}

uint64_t sample_poisson(double lambda, Rng& rng) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cdf = p;
  uint64_t k = 0;
  while (u >= cdf && k < kPoissonMaxK) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cdf += p;
    if (p == 0.0) break;  // cdf has saturated below u through rounding
  }
  return k;
}

ChunkRange select_chunk_range(std::span<const TokenSeq> sentences, const NoisingConfig& config,
                              Rng& rng, NoisingTelemetry* telemetry) {
  const size_t n = sentences.size();
  const size_t capacity = config.chunk_capacity();
  if (n == 0) throw Error(ErrorCode::kEmptyDocument, "document has no sentences");

  std::vector<size_t> len(n);
  size_t total = 0;
  size_t oversize = 0;
  for (size_t i = 0; i < n; ++i) {
    len[i] = sentences[i].size();
    total += len[i];
    if (len[i] > capacity) ++oversize;
  }
  if (telemetry) telemetry->skipped_sentences += oversize;
  if (oversize == n) throw Error(ErrorCode::kEmptyDocument, "every sentence exceeds the context");
  if (total == 0) throw Error(ErrorCode::kEmptyDocument, "document has no tokens");
  if (total <= capacity) return {0, n};

  auto fits = [&](size_t i) { return len[i] <= capacity; };
  // Two-pointer sweep: window [s, e) is the greedy extension from s.
  std::vector<ChunkRange> maximal;
  size_t e = 0;
  size_t sum = 0;
  for (size_t s = 0; s < n; ++s) {
    if (!fits(s)) {
      e = s + 1;
      sum = 0;
      continue;
    }
    if (e < s) {
      e = s;
      sum = 0;
    }
    while (e < n && fits(e) && sum + len[e] <= capacity) sum += len[e++];
    const bool left_blocked = s == 0 || !fits(s - 1) || len[s - 1] + sum > capacity;
    if (left_blocked) maximal.push_back({s, e});
    sum -= len[s];
  }
  const ChunkRange chosen = maximal[rng.uniform_index(maximal.size())];
  size_t chunk_tokens = 0;
  for (size_t i = chosen.begin; i < chosen.end; ++i) chunk_tokens += len[i];
  if (chunk_tokens == 0) throw Error(ErrorCode::kEmptyDocument, "selected chunk has no tokens");
  return chosen;
}

std::vector<TokenSeq> select_chunk(std::span<const TokenSeq> sentences,
                                   const NoisingConfig& config, Rng& rng,
                                   NoisingTelemetry* telemetry) {
  const ChunkRange r = select_chunk_range(sentences, config, rng, telemetry);
  return {sentences.begin() + static_cast<std::ptrdiff_t>(r.begin),
          sentences.begin() + static_cast<std::ptrdiff_t>(r.end)};
}

std::vector<TokenSeq> permute_sentences(std::vector<TokenSeq> chunk, Rng& rng) {
  for (size_t i = chunk.size(); i > 1; --i) {
    const size_t j = rng.uniform_index(i);
    std::swap(chunk[i - 1], chunk[j]);
  }
  return chunk;
}

size_t mask_budget(size_t n_tokens, double mask_ratio) {
  // The epsilon keeps products like 0.3 * 10 from flooring to 2.
  return static_cast<size_t>(std::floor(mask_ratio * static_cast<double>(n_tokens) + 1e-9));
}

TokenSeq infill_spans(std::span<const TokenId> ids, const NoisingConfig& config, Rng& rng,
                      NoisingTelemetry* telemetry) {
  const size_t n = ids.size();
  if (n == 0) throw Error(ErrorCode::kEmptyDocument, "nothing to mask");
  const size_t budget = mask_budget(n, config.mask_ratio);

  NoisingTelemetry local;
  std::vector<uint8_t> covered(n, 0);
  std::vector<uint8_t> span_start(n, 0);
  std::vector<uint32_t> insertions_at_gap(n + 1, 0);
  size_t remaining = budget;
  int zero_insertions = 0;

  auto is_free = [&](size_t start, size_t len) {
    for (size_t i = start; i < start + len; ++i) {
      if (covered[i]) return false;
    }
    return true;
  };
  auto place = [&](size_t start, size_t len) {
    std::fill(covered.begin() + static_cast<std::ptrdiff_t>(start),
              covered.begin() + static_cast<std::ptrdiff_t>(start + len), 1);
    span_start[start] = 1;
    ++local.spans;
    local.span_tokens += len;
    remaining -= len;
  };

  while (remaining > 0) {
    const uint64_t draw = sample_poisson(config.poisson_lambda, rng);
    ++local.poisson_draws;
    local.poisson_sum += draw;
    if (draw == 0) {
      ++local.zero_draws;
      if (zero_insertions < kMaxZeroLengthInsertions) {
        ++insertions_at_gap[rng.uniform_index(n + 1)];
        ++zero_insertions;
        ++local.zero_insertions;
      }
      continue;
    }
    size_t len = static_cast<size_t>(std::min<uint64_t>(draw, remaining));
    if (len < draw) ++local.clamped_draws;
    bool placed = false;
    while (!placed) {
      for (int attempt = 0; attempt < kSpanPlacementAttempts && !placed; ++attempt) {
        const size_t start = rng.uniform_index(n - len + 1);
        if (is_free(start, len)) {
          place(start, len);
          placed = true;
        }
      }
      if (placed) break;
      if (len > 1) {
        --len;
        ++local.shrunk_spans;
        continue;
      }
      // Single token: choose uniformly among the uncovered positions.
      const size_t free_count = static_cast<size_t>(std::count(covered.begin(), covered.end(), 0));
      size_t k = rng.uniform_index(free_count);
      for (size_t i = 0; i < n; ++i) {
        if (covered[i]) continue;
        if (k-- == 0) {
          place(i, 1);
          break;
        }
      }
      placed = true;
    }
  }

  TokenSeq out;
  out.reserve(n - budget + local.spans + local.zero_insertions);
  for (size_t i = 0; i <= n; ++i) {
    out.insert(out.end(), insertions_at_gap[i], kMaskId);
    if (i == n) break;
    if (covered[i]) {
      if (span_start[i]) out.push_back(kMaskId);
    } else {
      out.push_back(ids[i]);
    }
  }
  local.chunk_tokens = n;
  local.removed_tokens = budget;
  if (telemetry) telemetry->merge(local);
  return out;
}

uint64_t record_seed(uint64_t global_seed, std::string_view doc_id, uint64_t epoch) {
  return derive_seed(global_seed, {fnv1a64(doc_id), epoch});
}

TrainingExample make_example(std::span<const TokenSeq> document, const NoisingConfig& config,
                             Rng& rng, NoisingTelemetry* telemetry) {
  config.validate();
  NoisingTelemetry local;
  const ChunkRange range = select_chunk_range(document, config, rng, &local);
  std::vector<TokenSeq> chunk(document.begin() + static_cast<std::ptrdiff_t>(range.begin),
                              document.begin() + static_cast<std::ptrdiff_t>(range.end));

  TrainingExample ex;
  ex.chunk_begin = range.begin;
  ex.chunk_end = range.end;

  TokenSeq original;
  for (const TokenSeq& s : chunk) original.insert(original.end(), s.begin(), s.end());

  ex.decoder_input_ids.reserve(config.decoder_len);
  ex.decoder_input_ids.push_back(kBosId);
  ex.decoder_input_ids.insert(ex.decoder_input_ids.end(), original.begin(), original.end());
  ex.target_ids = original;
  ex.target_ids.push_back(kEosId);
  ex.n_real_target = ex.target_ids.size();
  ex.decoder_input_ids.resize(config.decoder_len, kPadId);
  ex.target_ids.resize(config.decoder_len, kPadId);

  const std::vector<TokenSeq> shuffled = permute_sentences(std::move(chunk), rng);
  TokenSeq flat;
  flat.reserve(original.size());
  for (const TokenSeq& s : shuffled) flat.insert(flat.end(), s.begin(), s.end());
  ex.encoder_ids = infill_spans(flat, config, rng, &local);
  if (ex.encoder_ids.size() > config.encoder_len) {
    ex.encoder_ids.resize(config.encoder_len);
    ex.encoder_truncated = true;
    ++local.truncated_examples;
  }
  ex.n_real_encoder = ex.encoder_ids.size();
  ex.encoder_ids.resize(config.encoder_len, kPadId);
  ++local.examples;
  if (telemetry) telemetry->merge(local);
  return ex;
}

TrainingExample make_example(std::span<const TokenSeq> document, std::string_view doc_id,
                             uint64_t epoch, const NoisingConfig& config,
                             NoisingTelemetry* telemetry) {
  Rng rng(record_seed(config.global_seed, doc_id, epoch));
  return make_example(document, config, rng, telemetry);
}

std::string serialize_example(const TrainingExample& example, std::string_view doc_id,
                              uint64_t epoch) {
  nlohmann::ordered_json j;
  j["doc_id"] = doc_id;
  j["epoch"] = epoch;
  j["encoder_ids"] = example.encoder_ids;
  j["decoder_input_ids"] = example.decoder_input_ids;
  j["target_ids"] = example.target_ids;
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

NoisingTelemetry run_noising(std::istream& in, std::ostream& out, const SentenceEncoder& encode,
                             uint64_t epoch, const NoisingConfig& config, int workers,
                             size_t batch_size) {
  config.validate();
  NoisingTelemetry total;
  JsonlReader reader(in);
  std::vector<RawRecord> batch;
  struct Result {
    std::optional<std::string> line;
    NoisingTelemetry telemetry;
  };
  std::vector<Result> results;
  while (reader.next_batch(batch_size, batch)) {
    results.assign(batch.size(), {});
    parallel_for(batch.size(), workers, [&](size_t i) {
      const Page page = parse_page(batch[i].line, batch[i].line_no);
      std::vector<TokenSeq> document;
      if (!page.sentences.empty()) {
        for (const Sentence& s : page.sentences) document.push_back(encode(s.text));
      } else {
        for (const Sentence& s : split_sentences(page.text)) document.push_back(encode(s.text));
      }
      try {
        const TrainingExample ex = make_example(document, page.id, epoch, config, &results[i].telemetry);
        results[i].line = serialize_example(ex, page.id, epoch);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyDocument) throw;
        results[i].telemetry = {};
        results[i].telemetry.skipped_documents = 1;
      }
    });
    for (const Result& r : results) {
      total.merge(r.telemetry);
      if (r.line) out << *r.line << '\n';
    }
    if (!out) throw Error(ErrorCode::kIo, "write failed");
  }
  return total;
}

}  // namespace corpuskit
