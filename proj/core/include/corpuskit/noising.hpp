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
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpuskit/random.hpp"
#include "corpuskit/tokenizer.hpp"

namespace corpuskit {

struct NoisingConfig {
  double mask_ratio = 0.30;
  double poisson_lambda = 3.5;
  size_t encoder_len = 800;
  size_t decoder_len = 1024;
  uint64_t global_seed = 0;

  void validate() const;
  // Tokens a chunk may hold: decoder_len minus room for <s> and </s>.
  size_t chunk_capacity() const { return decoder_len - 2; }
};

inline constexpr int kMaxZeroLengthInsertions = 10;
inline constexpr int kSpanPlacementAttempts = 100;

struct TrainingExample {
  TokenSeq encoder_ids;        // encoder_len, right-padded
  TokenSeq decoder_input_ids;  // decoder_len: <s> + chunk, right-padded
  TokenSeq target_ids;         // decoder_len: chunk + </s>, right-padded
  size_t n_real_encoder = 0;
  size_t n_real_target = 0;
  size_t chunk_begin = 0;  // sentence range selected from the document
  size_t chunk_end = 0;
  bool encoder_truncated = false;

  bool operator==(const TrainingExample&) const = default;
};

// Counters describing the masking process. All fields are integer sums so
// merging is order-independent.
struct NoisingTelemetry {
  uint64_t examples = 0;
  uint64_t skipped_documents = 0;
  uint64_t skipped_sentences = 0;  // sentences longer than the chunk capacity
  uint64_t chunk_tokens = 0;
  uint64_t removed_tokens = 0;
  uint64_t poisson_draws = 0;
  uint64_t poisson_sum = 0;  // pre-clamp
  uint64_t zero_draws = 0;
  uint64_t zero_insertions = 0;
  uint64_t spans = 0;
  uint64_t span_tokens = 0;  // post-clamp
  uint64_t clamped_draws = 0;
  uint64_t shrunk_spans = 0;
  uint64_t truncated_examples = 0;

  void merge(const NoisingTelemetry& other);
  double mean_span_length_pre_clamp() const;
  double mean_span_length() const;
  double clamp_rate() const;
  double truncation_rate() const;
  double mask_fraction() const;
  nlohmann::ordered_json to_json() const;
};

// Poisson variate by sequential inversion of the CDF; successive pmf terms
// are built multiplicatively, p(k) = p(k-1) * lambda / k.
uint64_t sample_poisson(double lambda, Rng& rng);

struct ChunkRange {
  size_t begin = 0;
  size_t end = 0;  // exclusive
};

// Picks a contiguous run of whole sentences totalling at most
// chunk_capacity() tokens. The whole document is returned when it fits;
// otherwise the start is uniform over the starts of maximal windows (windows
// that cannot grow on either side). Sentences over capacity never join a
// chunk. Throws Error(kEmptyDocument) when nothing fits or the document has
// no tokens.
ChunkRange select_chunk_range(std::span<const TokenSeq> sentences, const NoisingConfig& config,
                              Rng& rng, NoisingTelemetry* telemetry = nullptr);
std::vector<TokenSeq> select_chunk(std::span<const TokenSeq> sentences,
                                   const NoisingConfig& config, Rng& rng,
                                   NoisingTelemetry* telemetry = nullptr);

// Fisher-Yates shuffle of sentence order.
std::vector<TokenSeq> permute_sentences(std::vector<TokenSeq> chunk, Rng& rng);

// Removes exactly floor(mask_ratio * n) tokens as non-overlapping spans with
// Poisson lengths, each replaced by one <mask>. Zero-length draws insert a
// lone <mask> (at most kMaxZeroLengthInsertions per call). Throws
// Error(kEmptyDocument) for empty input.
TokenSeq infill_spans(std::span<const TokenId> ids, const NoisingConfig& config, Rng& rng,
                      NoisingTelemetry* telemetry = nullptr);

size_t mask_budget(size_t n_tokens, double mask_ratio);

uint64_t record_seed(uint64_t global_seed, std::string_view doc_id, uint64_t epoch);

TrainingExample make_example(std::span<const TokenSeq> document, const NoisingConfig& config,
                             Rng& rng, NoisingTelemetry* telemetry = nullptr);

// Seeds the generator from (global_seed, doc_id, epoch).
TrainingExample make_example(std::span<const TokenSeq> document, std::string_view doc_id,
                             uint64_t epoch, const NoisingConfig& config,
                             NoisingTelemetry* telemetry = nullptr);

std::string serialize_example(const TrainingExample& example, std::string_view doc_id,
                              uint64_t epoch);

using SentenceEncoder = std::function<TokenSeq(std::string_view)>;

// Reads a cleaned JSON-lines corpus (sentences taken from "sentences", or
// segmented from "text" when absent), writes one example per document in
// input order. Documents with nothing to chunk are skipped and counted.
NoisingTelemetry run_noising(std::istream& in, std::ostream& out, const SentenceEncoder& encode,
                             uint64_t epoch, const NoisingConfig& config, int workers,
                             size_t batch_size = 256);

}  // namespace corpuskit
