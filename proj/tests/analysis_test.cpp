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

#include <gtest/gtest.h>

#include <sstream>

#include "corpuskit/error.hpp"
#include "corpuskit/tokenizer.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace corpuskit {
namespace {

TEST(Calculators, RelativeTokens) {
  EXPECT_NEAR(relative_tokens(119700, 100000), 1.1970, 1e-12);
  EXPECT_DOUBLE_EQ(relative_tokens(12345, 12345), 1.0);
  try {
    relative_tokens(5, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivisionByZero);
  }
}

TEST(Calculators, ReferenceFigures) {
  EXPECT_NEAR(representation_power(1.1970, 250054, 32000), 9.35, 0.005);
  EXPECT_NEAR(chinchilla_ratio(708e9, 387.6e6), 91.33, 0.01);
  EXPECT_NEAR(chinchilla_ratio(84e9, 387.6e6), 10.83, 0.01);
  EXPECT_NEAR(optimal_steps(387.6e6, 256, 1024), 29571, 1.0);
  EXPECT_NEAR(optimal_steps(387.6e6, 128, 1024), 59143, 1.0);
  EXPECT_EQ(tokens_seen(2700000, 256, 1024), 707788800000u);
  EXPECT_EQ(tokens_seen(640000, 128, 1024), 83886080000u);
  EXPECT_NEAR(epochs(707788800000.0, 25.33e9), 27.9, 0.2);
}

TEST(Calculators, TrivialIdentities) {
  EXPECT_DOUBLE_EQ(representation_power(1.0, 32000, 32000), 1.0);
  EXPECT_DOUBLE_EQ(representation_power(2.0, 64000, 32000), 4.0);
  EXPECT_DOUBLE_EQ(chinchilla_ratio(20.0 * 1e8, 1e8), 1.0);
  for (double k : {1.0, 17.0, 3000.0}) {
    EXPECT_NEAR(optimal_steps(256.0 * 1024.0 * k / 20.0, 256, 1024), k, 1e-9);
  }
}

TEST(Calculators, RepresentationPowerScaleInvariant) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const uint64_t a = 1 + rng.uniform_index(1000000);
    const uint64_t b = 1 + rng.uniform_index(1000000);
    const uint64_t s = 1 + rng.uniform_index(1000);
    EXPECT_NEAR(representation_power(relative_tokens(a, b), 50000, 32000),
                representation_power(relative_tokens(a * s, b * s), 50000, 32000), 1e-9);
  }
}

TEST(Budget, IntegerIdentities) {
  const BudgetReport r = make_budget_report(387600000, 2700000, 256, 1024, 25330000000);
  EXPECT_EQ(r.tokens_seen, r.steps * r.batch * r.ctx);
  EXPECT_NEAR(r.epochs, 27.94, 0.01);
  EXPECT_NEAR(r.optimal_steps, 29571, 1.0);
  EXPECT_NEAR(r.chinchilla_ratio, chinchilla_ratio(static_cast<double>(r.tokens_seen), 387600000.0), 1e-9);
  const auto j = r.to_json();
  EXPECT_EQ(j["tokens_seen"].get<uint64_t>(), 707788800000u);
}

TEST(TokenizerComparison, MatchesPerPageSumOracle) {
  // Two built-in tokenizers over a 100-page fixture.
  const auto corpus = testing::make_corpus(100, 0, 12);
  std::vector<VocabPiece> pieces;
  for (const auto& w : testing::word_pool()) pieces.push_back({std::string(kWordBoundary) + w, -2.0});
  for (char32_t c = U'a'; c <= U'z'; ++c) pieces.push_back({std::string(1, static_cast<char>(c)), -6.0});
  const Vocab vocab = Vocab::from_pieces(pieces);
  uint64_t ws_total = 0, uni_total = 0;
  std::istringstream in(corpus.jsonl);
  for (std::string line; std::getline(in, line);) {
    const std::string text = nlohmann::json::parse(line)["text"];
    ws_total += encode_whitespace(text).size();
    uni_total += encode_unigram(vocab, text).size();
  }
  const std::vector<TokenizerCount> counts = {{"whitespace", 1u << 20, ws_total},
                                              {"unigram", vocab.size(), uni_total}};
  const auto reports = compare_tokenizers(counts, "whitespace");
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_DOUBLE_EQ(reports[0].relative_tokens, 1.0);
  EXPECT_DOUBLE_EQ(reports[1].relative_tokens,
                   static_cast<double>(uni_total) / static_cast<double>(ws_total));
  EXPECT_GT(reports[1].relative_tokens, 1.0);
  EXPECT_THROW(compare_tokenizers(counts, "missing"), Error);
}

TEST(TokenizerComparison, CountsTsv) {
  std::istringstream in("# name\tvocab\ttokens\nalpha\t32000\t100000\nbeta\t250054\t119700\n");
  const auto counts = read_counts_tsv(in);
  ASSERT_EQ(counts.size(), 2u);
  const auto reports = compare_tokenizers(counts, "alpha");
  EXPECT_NEAR(reports[1].relative_tokens, 1.1970, 1e-12);
  EXPECT_NEAR(reports[1].representation_power, 9.35, 0.005);
  EXPECT_NE(format_table(reports).find("beta"), std::string::npos);
  std::istringstream bad("x\t1\n");
  EXPECT_THROW(read_counts_tsv(bad), Error);
}

TEST(Intersections, IdenticalAndDisjoint) {
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("kayıt " + std::to_string(i));
  std::vector<std::string> other;
  for (int i = 0; i < 7; ++i) other.push_back("başka " + std::to_string(i));
  const std::vector<Dataset> ds = {{"a", ten}, {"b", ten}, {"c", other}};
  const auto m = split_intersections(ds);
  EXPECT_EQ(m.counts[0][1], 10u);
  EXPECT_EQ(m.counts[0][2], 0u);
  EXPECT_EQ(m.counts[2][2], 7u);
}

TEST(Intersections, CanonicalizationAndMultiset) {
  const std::vector<Dataset> ds = {{"a", {"  bir   iki ", "bir iki", "üç"}}, {"b", {"bir\tiki", "dört"}}};
  const auto m = split_intersections(ds);
  EXPECT_EQ(m.counts[0][1], 1u);
  EXPECT_EQ(canonicalize_record("  a \t b\n"), "a b");
}

TEST(Intersections, PlantedSplitStructureMatchesNestedLoopOracle) {
  const auto p = testing::planted_qa_splits(194);
  std::vector<Dataset> ds;
  for (size_t i = 0; i < p.names.size(); ++i) ds.push_back({p.names[i], p.records[i]});
  const auto m = split_intersections(ds);
  for (size_t a = 0; a < ds.size(); ++a) {
    EXPECT_EQ(m.counts[a][a], ds[a].records.size());
    for (size_t b = a + 1; b < ds.size(); ++b) {
      EXPECT_EQ(m.counts[a][b], m.counts[b][a]);
      EXPECT_EQ(m.counts[a][b], p.planted[a][b]) << p.names[a] << " x " << p.names[b];
      EXPECT_LE(m.counts[a][b], std::min(m.sizes[a], m.sizes[b]));
    }
  }
  // The quadratic oracle on the pairs carrying the 194-record overlaps.
  EXPECT_EQ(testing::nested_loop_intersection(p.records[4], p.records[1]), 194u);
  EXPECT_EQ(testing::nested_loop_intersection(p.records[3], p.records[2]), 194u);
  EXPECT_EQ(m.counts[4][1], 194u);
}

TEST(Intersections, RandomMultisetsMatchOracle) {
  Rng rng(8);
  for (int t = 0; t < 30; ++t) {
    std::vector<Dataset> ds(3);
    for (auto& d : ds) {
      d.name = "d";
      const size_t n = rng.uniform_index(60);
      for (size_t i = 0; i < n; ++i) d.records.push_back("r " + std::to_string(rng.uniform_index(25)));
    }
    const auto m = split_intersections(ds);
    for (size_t a = 0; a < 3; ++a)
      for (size_t b = 0; b < 3; ++b)
        if (a != b) EXPECT_EQ(m.counts[a][b], testing::nested_loop_intersection(ds[a].records, ds[b].records));
  }
}

}  // namespace
}  // namespace corpuskit
