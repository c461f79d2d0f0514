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

#include "corpuskit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <unordered_set>

#include "corpuskit/corpus.hpp"
#include "corpuskit/error.hpp"
#include "corpuskit/parallel.hpp"
#include "corpuskit/random.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

struct FirstPassRecord {
  std::string id;
  std::optional<FeatureVector> features;
};

struct SecondPassRecord {
  uint64_t tokens_in = 0;
  uint64_t sentences_in = 0;
  std::string page_rule;  // empty when the page passed the page rules
  std::vector<std::string_view> sentence_rules;  // one per rejected sentence
  bool kept = false;
  uint64_t sentences_out = 0;
  uint64_t tokens_out = 0;
  std::string line;
};

void check_unique(std::unordered_set<uint64_t>& seen, const std::string& id, size_t line_no) {
  if (!seen.insert(fnv1a64(id)).second) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": duplicate page id '" + id + "'");
  }
}

}  // namespace

void PipelineConfig::validate() const {
  cleaning.validate();
  forest.validate();
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
}

nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["anomaly_filter"] = cleaning.anomaly_filter;
  j["anomaly_threshold"] = cleaning.anomaly_threshold;
  j["lang_prob_threshold"] = cleaning.lang_prob_threshold;
  j["blocklist"] = cleaning.blocklist_path;
  j["min_sentences_per_page"] = cleaning.min_sentences_per_page;
  j["min_words"] = cleaning.min_words;
  j["max_words"] = cleaning.max_words;
  j["max_word_len"] = cleaning.max_word_len;
  j["uppercase_frac_limit"] = cleaning.uppercase_frac_limit;
  j["numeric_frac_limit"] = cleaning.numeric_frac_limit;
  j["duplicate_word_limit"] = cleaning.duplicate_word_limit;
  j["n_trees"] = forest.n_trees;
  j["subsample_size"] = forest.subsample_size;
  j["seed"] = forest.seed;
  j["abbreviations"] = abbreviations;
  return j;
}

uint64_t CleaningReport::pages_rejected() const {
  uint64_t total = 0;
  for (const auto& [rule, n] : page_rejections) total += n;
  return total;
}

uint64_t CleaningReport::sentences_rejected() const {
  uint64_t total = 0;
  for (const auto& [rule, n] : sentence_rejections) total += n;
  return total;
}

nlohmann::ordered_json CleaningReport::to_json() const {
  nlohmann::ordered_json j;
  j["pages_in"] = pages_in;
  j["pages_out"] = pages_out;
  j["pages_rejected"] = pages_rejected();
  j["sentences_in"] = sentences_in;
  j["sentences_out"] = sentences_out;
  j["sentences_rejected"] = sentences_rejected();
  j["tokens_in"] = tokens_in;
  j["tokens_out"] = tokens_out;
  j["anomaly_filter_applied"] = anomaly_filter_applied;
  j["forest_sample_size"] = forest_sample_size;
  nlohmann::ordered_json pages = nlohmann::ordered_json::object();
  for (const auto& [rule, n] : page_rejections) pages[rule] = n;
  j["page_rejections"] = pages;
  nlohmann::ordered_json sentences = nlohmann::ordered_json::object();
  for (const auto& [rule, n] : sentence_rejections) sentences[rule] = n;
  j["sentence_rejections"] = sentences;
  return j;
}

namespace {

// Parses and featurizes every record, invoking sink(id, features) in input
// order. Features are absent for pages without sentences.
template <typename Sink>
void first_pass(std::istream& in, const SentenceSplitter& splitter, int workers,
                size_t batch_size, Sink&& sink) {
  std::unordered_set<uint64_t> seen;
  JsonlReader reader(in);
  std::vector<RawRecord> batch;
  std::vector<FirstPassRecord> results;
  while (reader.next_batch(batch_size, batch)) {
    results.assign(batch.size(), {});
    parallel_for(batch.size(), workers, [&](size_t i) {
      Page page = parse_page(batch[i].line, batch[i].line_no);
      const auto sentences = splitter.split(page.text);
      results[i].id = std::move(page.id);
      if (!sentences.empty()) {
        results[i].features = compute_features(sentences, page.text).as_array();
      }
    });
    for (size_t i = 0; i < batch.size(); ++i) {
      check_unique(seen, results[i].id, batch[i].line_no);
      sink(results[i].id, results[i].features);
    }
  }
}

}  // namespace

std::vector<FeatureRecord> extract_features(std::istream& in, const SentenceSplitter& splitter,
                                            int workers, size_t batch_size) {
  std::vector<FeatureRecord> out;
  first_pass(in, splitter, workers, batch_size,
             [&](const std::string& id, const std::optional<FeatureVector>& f) {
               if (f) out.push_back({id, PageFeatures::from_array(*f)});
             });
  return out;
}

CleaningReport run_pipeline(std::istream& in, std::ostream& out, const PipelineConfig& config,
                            const Blocklist& blocklist) {
  config.validate();
  const SentenceSplitter splitter(config.abbreviations);
  CleaningReport report;

  std::vector<std::optional<FeatureVector>> features_by_record;
  first_pass(in, splitter, config.workers, config.batch_size,
             [&](const std::string&, const std::optional<FeatureVector>& f) {
               features_by_record.push_back(f);
             });

  // Forest fit is a barrier: every page participates in training and scoring.
  std::vector<double> decision(features_by_record.size(),
                               std::numeric_limits<double>::quiet_NaN());
  if (config.cleaning.anomaly_filter) {
    std::vector<FeatureVector> points;
    for (const auto& f : features_by_record) {
      if (f) points.push_back(*f);
    }
    if (points.size() >= 2) {
      ForestConfig fc = config.forest;
      fc.workers = config.workers;
      fc.subsample_size = static_cast<int>(
          std::min<size_t>(static_cast<size_t>(fc.subsample_size), points.size()));
      const IsolationForest forest = fit(points, fc);
      report.anomaly_filter_applied = true;
      report.forest_sample_size = forest.sample_size;
      parallel_for(features_by_record.size(), config.workers, [&](size_t i) {
        if (features_by_record[i]) decision[i] = decision_score(forest, *features_by_record[i]);
      });
    }
  }

  CleaningConfig page_config = config.cleaning;
  page_config.anomaly_filter = report.anomaly_filter_applied;

  // Pass 2: filters and output.
  in.clear();
  in.seekg(0);
  if (!in) throw Error(ErrorCode::kIo, "corpus input is not seekable");
  JsonlReader reader(in);
  std::vector<RawRecord> batch;
  std::vector<SecondPassRecord> results;
  size_t ordinal = 0;
  while (reader.next_batch(config.batch_size, batch)) {
    results.assign(batch.size(), {});
    const size_t base = ordinal;
    parallel_for(batch.size(), config.workers, [&](size_t i) {
      SecondPassRecord& r = results[i];
      Page page = parse_page(batch[i].line, batch[i].line_no);
      r.tokens_in = unicode::split_words(page.text).size();
      std::vector<Sentence> sentences = splitter.split(page.text);
      if (sentences.empty()) {
        r.page_rule = rules::kEmptyPage;
        return;
      }
      const double d = decision[base + i];
      if (!std::isnan(d)) page.decision_score = d;
      const Verdict pv = clean_page(page, page_config, blocklist);
      if (!pv.kept) {
        r.page_rule = *pv.rule_id;
        return;
      }
      r.sentences_in = sentences.size();
      for (Sentence& s : sentences) {
        if (const auto rule = first_failing_rule(s, config.cleaning)) {
          r.sentence_rules.push_back(*rule);
        } else {
          page.sentences.push_back(std::move(s));
        }
      }
      if (!survives_finalization(page, config.cleaning)) {
        r.page_rule = rules::kMinSentences;
        return;
      }
      r.kept = true;
      r.sentences_out = page.sentences.size();
      for (const Sentence& s : page.sentences) r.tokens_out += s.word_count;
      r.line = serialize_page(page);
    });
    ordinal += batch.size();

    for (const SecondPassRecord& r : results) {
      ++report.pages_in;
      report.tokens_in += r.tokens_in;
      report.sentences_in += r.sentences_in;
      for (std::string_view rule : r.sentence_rules) ++report.sentence_rejections[std::string(rule)];
      if (!r.kept) {
        ++report.page_rejections[r.page_rule];
        continue;
      }
      ++report.pages_out;
      report.sentences_out += r.sentences_out;
      report.tokens_out += r.tokens_out;
      out << r.line << '\n';
    }
    if (!out) throw Error(ErrorCode::kIo, "write failed");
  }
  if (ordinal != features_by_record.size()) {
    throw Error(ErrorCode::kIo, "corpus changed between passes");
  }
  return report;
}

}  // namespace corpuskit
