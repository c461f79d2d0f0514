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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "corpuskit/error.hpp"
#include "test_support.hpp"

namespace corpuskit {
namespace {

// Sentence i holds tokens 1000*(i+1) + k so origin and order are recoverable.
std::vector<TokenSeq> marked_document(const std::vector<size_t>& lengths) {
  std::vector<TokenSeq> doc;
  for (size_t i = 0; i < lengths.size(); ++i) {
    TokenSeq s;
    for (size_t k = 0; k < lengths[i]; ++k) s.push_back(static_cast<TokenId>(1000 * (i + 1) + k));
    doc.push_back(std::move(s));
  }
  return doc;
}

TokenSeq random_tokens(Rng& rng, size_t n) {
  TokenSeq t(n);
  for (auto& id : t) id = static_cast<TokenId>(kNumSpecialIds + rng.uniform_index(30000));
  return t;
}

bool is_subsequence(const TokenSeq& needle, const TokenSeq& hay) {
  size_t j = 0;
  for (size_t i = 0; i < hay.size() && j < needle.size(); ++i) j += hay[i] == needle[j];
  return j == needle.size();
}

// Chi-square critical value at p = 0.001 (Wilson-Hilferty).
double chi2_critical(double df) {
  const double z = 3.090232;
  const double a = 2.0 / (9.0 * df);
  return df * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

TEST(Poisson, MeanAndZeroMass) {
  Rng rng(2024);
  const int n = 100000;
  double sum = 0;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const uint64_t k = sample_poisson(3.5, rng);
    sum += static_cast<double>(k);
    zeros += k == 0;
  }
  EXPECT_NEAR(sum / n, 3.5, 0.05);
  EXPECT_NEAR(static_cast<double>(zeros) / n, std::exp(-3.5), 0.003);
}

TEST(Poisson, MatchesAnalyticPmf) {
  Rng rng(8);
  const int n = 200000;
  std::map<uint64_t, int> hist;
  for (int i = 0; i < n; ++i) ++hist[sample_poisson(3.5, rng)];
  double pmf = std::exp(-3.5);
  double chi2 = 0;
  int cells = 0;
  for (uint64_t k = 0; k <= 10; ++k) {
    if (k > 0) pmf *= 3.5 / static_cast<double>(k);
    const double expected = pmf * n;
    chi2 += std::pow(hist[k] - expected, 2) / expected;
    ++cells;
  }
  EXPECT_LT(chi2, chi2_critical(cells - 1));
}

TEST(Poisson, RepeatableForFixedSeed) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_poisson(3.5, a), sample_poisson(3.5, b));
}

TEST(SelectChunk, WholeDocumentWhenItFits) {
  Rng rng(1);
  const auto doc = marked_document({100, 200, 150, 50});
  const ChunkRange r = select_chunk_range(doc, {}, rng);
  EXPECT_EQ(r.begin, 0u);
  EXPECT_EQ(r.end, 4u);
}

TEST(SelectChunk, TenByTwoHundredGivesFive) {
  const auto doc = marked_document(std::vector<size_t>(10, 200));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const ChunkRange r = select_chunk_range(doc, {}, rng);
    EXPECT_EQ(r.end - r.begin, 5u);
  }
}

// Enumerates every window and keeps those that fit and cannot grow.
std::vector<ChunkRange> maximal_windows_oracle(const std::vector<size_t>& len, size_t cap) {
  std::vector<ChunkRange> out;
  const size_t n = len.size();
  for (size_t b = 0; b < n; ++b) {
    for (size_t e = b + 1; e <= n; ++e) {
      size_t sum = 0;
      bool ok = true;
      for (size_t i = b; i < e; ++i) {
        ok = ok && len[i] <= cap;
        sum += len[i];
      }
      if (!ok || sum > cap) continue;
      const bool left = b == 0 || len[b - 1] > cap || sum + len[b - 1] > cap;
      const bool right = e == n || len[e] > cap || sum + len[e] > cap;
      if (left && right) out.push_back({b, e});
    }
  }
  return out;
}

TEST(SelectChunk, StartsUniformOverMaximalWindows) {
  const std::vector<size_t> lengths = {300, 90, 400, 1200, 250, 250, 500, 30, 700, 120, 640, 310, 80};
  const auto doc = marked_document(lengths);
  const NoisingConfig cfg;
  const auto windows = maximal_windows_oracle(lengths, cfg.chunk_capacity());
  ASSERT_GE(windows.size(), 5u);
  std::map<std::pair<size_t, size_t>, int> hist;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    Rng rng(static_cast<uint64_t>(seed));
    const ChunkRange r = select_chunk_range(doc, cfg, rng);
    ++hist[{r.begin, r.end}];
  }
  EXPECT_EQ(hist.size(), windows.size());
  double chi2 = 0;
  const double expected = static_cast<double>(trials) / static_cast<double>(windows.size());
  for (const ChunkRange& w : windows) {
    const int seen = hist[{w.begin, w.end}];
    chi2 += (seen - expected) * (seen - expected) / expected;
  }
  EXPECT_LT(chi2, chi2_critical(static_cast<double>(windows.size() - 1)));
}

TEST(SelectChunk, RandomDocumentsMatchOracleSupport) {
  Rng gen(77);
  const NoisingConfig cfg;
  for (int d = 0; d < 200; ++d) {
    std::vector<size_t> lengths(1 + gen.uniform_index(15));
    for (auto& l : lengths) l = 1 + gen.uniform_index(gen.uniform() < 0.1 ? 1500 : 400);
    const auto doc = marked_document(lengths);
    const size_t total = std::accumulate(lengths.begin(), lengths.end(), size_t{0});
    const bool any_fit = std::any_of(lengths.begin(), lengths.end(),
                                     [&](size_t l) { return l <= cfg.chunk_capacity(); });
    Rng rng(static_cast<uint64_t>(d));
    if (!any_fit) {
      EXPECT_THROW(select_chunk_range(doc, cfg, rng), Error);
      continue;
    }
    const ChunkRange r = select_chunk_range(doc, cfg, rng);
    if (total <= cfg.chunk_capacity()) {
      EXPECT_EQ(r.begin, 0u);
      EXPECT_EQ(r.end, lengths.size());
      continue;
    }
    const auto windows = maximal_windows_oracle(lengths, cfg.chunk_capacity());
    EXPECT_TRUE(std::any_of(windows.begin(), windows.end(), [&](const ChunkRange& w) {
      return w.begin == r.begin && w.end == r.end;
    })) << d;
  }
}

TEST(SelectChunk, EmptyDocument) {
  Rng rng(0);
  EXPECT_THROW(select_chunk_range({}, {}, rng), Error);
  const auto huge = marked_document({5000});
  NoisingTelemetry t;
  try {
    select_chunk_range(huge, {}, rng, &t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDocument);
  }
  EXPECT_EQ(t.skipped_sentences, 1u);
}

TEST(Permute, SingleSentenceAndMultiset) {
  Rng rng(3);
  const auto one = marked_document({7});
  EXPECT_EQ(permute_sentences(one, rng), one);
  const auto doc = marked_document({3, 1, 4, 1, 5, 9, 2, 6});
  for (int i = 0; i < 50; ++i) {
    auto p = permute_sentences(doc, rng);
    std::multiset<TokenSeq> a(doc.begin(), doc.end()), b(p.begin(), p.end());
    EXPECT_EQ(a, b);
  }
}

TEST(Permute, UniformOverSixOrders) {
  const auto doc = marked_document({1, 2, 3});
  std::map<std::vector<TokenSeq>, int> hist;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    Rng rng(derive_seed(99, {static_cast<uint64_t>(seed)}));
    ++hist[permute_sentences(doc, rng)];
  }
  ASSERT_EQ(hist.size(), 6u);
  for (const auto& [order, count] : hist) EXPECT_NEAR(count / double(trials), 1.0 / 6.0, 0.02);
}

TEST(Infill, TenTokensRemoveThree) {
  EXPECT_EQ(mask_budget(10, 0.3), 3u);
  EXPECT_EQ(mask_budget(1000, 0.3), 300u);
  EXPECT_EQ(mask_budget(3, 0.3), 0u);
  Rng rng(4);
  const TokenSeq ids = {10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  for (int i = 0; i < 200; ++i) {
    NoisingTelemetry t;
    const TokenSeq out = infill_spans(ids, {}, rng, &t);
    const auto kept = std::count_if(out.begin(), out.end(), [](TokenId x) { return x != kMaskId; });
    EXPECT_EQ(kept, 7);
    TokenSeq survivors;
    for (TokenId x : out)
      if (x != kMaskId) survivors.push_back(x);
    EXPECT_TRUE(is_subsequence(survivors, ids));
    EXPECT_EQ(out.size(), 10 - 3 + t.spans + t.zero_insertions);
  }
}

TEST(Infill, ZeroBudgetOnlyInsertsMasks) {
  NoisingConfig cfg;
  cfg.mask_ratio = 0.01;
  Rng rng(6);
  const TokenSeq ids = {10, 11, 12, 13, 14};
  for (int i = 0; i < 100; ++i) {
    const TokenSeq out = infill_spans(ids, cfg, rng);
    TokenSeq stripped;
    for (TokenId x : out)
      if (x != kMaskId) stripped.push_back(x);
    EXPECT_EQ(stripped, ids);
  }
}

TEST(Infill, BudgetAndSpanStatisticsOverThousandSequences) {
  Rng rng(31);
  NoisingTelemetry t;
  for (int i = 0; i < 1000; ++i) {
    const TokenSeq ids = random_tokens(rng, 1000);
    NoisingTelemetry one;
    const TokenSeq out = infill_spans(ids, {}, rng, &one);
    size_t survivors = 0;
    for (TokenId x : out) survivors += x != kMaskId;
    ASSERT_EQ(1000 - survivors, 300u);
    EXPECT_LE(one.zero_insertions, static_cast<uint64_t>(kMaxZeroLengthInsertions));
    t.merge(one);
  }
  EXPECT_DOUBLE_EQ(t.mask_fraction(), 0.3);
  EXPECT_NEAR(t.mean_span_length_pre_clamp(), 3.5, 0.1);
  EXPECT_EQ(t.span_tokens, t.removed_tokens);
}

TEST(Infill, EmptyInputThrows) {
  Rng rng(0);
  EXPECT_THROW(infill_spans({}, {}, rng), Error);
}

void check_example_invariants(const TrainingExample& ex, const std::vector<TokenSeq>& doc,
                              const NoisingConfig& cfg) {
  ASSERT_EQ(ex.encoder_ids.size(), cfg.encoder_len);
  ASSERT_EQ(ex.decoder_input_ids.size(), cfg.decoder_len);
  ASSERT_EQ(ex.target_ids.size(), cfg.decoder_len);
  ASSERT_LE(ex.n_real_encoder, cfg.encoder_len);
  ASSERT_LE(ex.n_real_target, cfg.decoder_len);
  // Chunk tokens in document order.
  TokenSeq chunk;
  for (size_t i = ex.chunk_begin; i < ex.chunk_end; ++i) chunk.insert(chunk.end(), doc[i].begin(), doc[i].end());
  // Target integrity.
  TokenSeq target(ex.target_ids.begin(), ex.target_ids.begin() + ex.n_real_target);
  ASSERT_EQ(target.back(), kEosId);
  target.pop_back();
  EXPECT_EQ(target, chunk);
  // decoder_input = [bos] + target[..-1]
  EXPECT_EQ(ex.decoder_input_ids[0], kBosId);
  for (size_t i = 1; i < ex.n_real_target; ++i) EXPECT_EQ(ex.decoder_input_ids[i], ex.target_ids[i - 1]);
  for (size_t i = ex.n_real_target; i < cfg.decoder_len; ++i) EXPECT_EQ(ex.decoder_input_ids[i], kPadId);
  // Padding only on the right.
  for (size_t i = ex.n_real_target; i < cfg.decoder_len; ++i) EXPECT_EQ(ex.target_ids[i], kPadId);
  for (size_t i = 0; i < ex.n_real_encoder; ++i) EXPECT_NE(ex.encoder_ids[i], kPadId);
  for (size_t i = ex.n_real_encoder; i < cfg.encoder_len; ++i) EXPECT_EQ(ex.encoder_ids[i], kPadId);
  // Contiguity via markers: each chunk sentence index follows the previous.
  for (size_t i = ex.chunk_begin + 1; i < ex.chunk_end; ++i) EXPECT_EQ(doc[i][0] / 1000, doc[i - 1][0] / 1000 + 1);
  // Budget exactness when nothing was truncated.
  if (!ex.encoder_truncated) {
    size_t survivors = 0;
    for (size_t i = 0; i < ex.n_real_encoder; ++i) survivors += ex.encoder_ids[i] != kMaskId;
    EXPECT_EQ(chunk.size() - survivors, mask_budget(chunk.size(), cfg.mask_ratio));
  }
}

TEST(MakeExample, InvariantsOnRandomDocuments) {
  Rng gen(13);
  const NoisingConfig cfg;
  for (int d = 0; d < 300; ++d) {
    std::vector<size_t> lengths(1 + gen.uniform_index(30));
    for (auto& l : lengths) l = 1 + gen.uniform_index(120);
    const auto doc = marked_document(lengths);
    const TrainingExample ex = make_example(doc, "doc-" + std::to_string(d), 0, cfg);
    check_example_invariants(ex, doc, cfg);
  }
}

TEST(MakeExample, TruncationIsCountedAndBounded) {
  NoisingConfig cfg;
  cfg.encoder_len = 16;
  cfg.decoder_len = 64;
  const auto doc = marked_document({20, 20, 20});
  NoisingTelemetry t;
  const TrainingExample ex = make_example(doc, "t", 0, cfg, &t);
  EXPECT_TRUE(ex.encoder_truncated);
  EXPECT_EQ(t.truncated_examples, 1u);
  EXPECT_EQ(ex.n_real_encoder, 16u);
  check_example_invariants(ex, doc, cfg);
}

TEST(MakeExample, Deterministic) {
  const auto doc = marked_document({120, 80, 200, 100});
  const auto a = make_example(doc, "same", 3, {});
  const auto b = make_example(doc, "same", 3, {});
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize_example(a, "same", 3), serialize_example(b, "same", 3));
}

TEST(MakeExample, EpochsGiveDistinctEncoders) {
  const auto doc = marked_document({100, 100, 100, 100, 100});
  std::set<TokenSeq> seen;
  for (uint64_t epoch = 0; epoch < 100; ++epoch) {
    const auto ex = make_example(doc, "d", epoch, {});
    EXPECT_TRUE(seen.insert(ex.encoder_ids).second) << "epoch " << epoch;
  }
  EXPECT_NE(make_example(doc, "d", 0, {}).encoder_ids, make_example(doc, "d", 1, {}).encoder_ids);
}

TEST(MakeExample, DecodedTargetIsChunkText) {
  std::vector<VocabPiece> pieces;
  for (const char* w : {"bu", "bir", "deneme", "cümlesidir.", "ikinci", "cümle."})
    pieces.push_back({std::string(kWordBoundary) + w, -1.0});
  const Vocab v = Vocab::from_pieces(pieces);
  const std::vector<TokenSeq> doc = {encode_unigram(v, "bu bir deneme cümlesidir."),
                                     encode_unigram(v, "bu ikinci cümle.")};
  const auto ex = make_example(doc, "x", 0, {});
  EXPECT_EQ(decode(v, ex.target_ids), "bu bir deneme cümlesidir. bu ikinci cümle.");
}

TEST(RunNoising, IndependentOfWorkersAndBatches) {
  const auto corpus = testing::make_corpus(120, 0, 9);
  auto run = [&](int workers, size_t batch) {
    std::istringstream in(corpus.jsonl);
    std::ostringstream out;
    const NoisingTelemetry t = run_noising(in, out, encode_whitespace, 2, {}, workers, batch);
    return out.str() + t.to_json().dump();
  };
  const std::string base = run(1, 256);
  EXPECT_EQ(run(4, 256), base);
  EXPECT_EQ(run(8, 3), base);
}

TEST(NoisingConfig, Validation) {
  NoisingConfig c;
  EXPECT_NO_THROW(c.validate());
  c.mask_ratio = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.encoder_len = 2000;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.poisson_lambda = 0;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace corpuskit
